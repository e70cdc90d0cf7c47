"""Benchmark problem registry (31 problems across five suites)."""

from __future__ import annotations

from . import dtlz, ksw, lz09, wfg, zdt
from .base import FrontSource, ProblemSpec, TruePFSample

_ZDT_NAMES = ("ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6")
_DTLZ_NAMES = tuple(f"DTLZ{i}" for i in range(1, 8))
_LZ09_NAMES = tuple(f"LZ09_F{i}" for i in range(1, 10))
_WFG_NAMES = tuple(f"WFG{i}" for i in range(1, 10))

PROBLEM_NAMES = _DTLZ_NAMES + ("KSW10",) + _LZ09_NAMES + _WFG_NAMES + _ZDT_NAMES

_ALIASES = {"KSW": "KSW10"}


def make_problem(name: str, objectives: int | None = None) -> ProblemSpec:
    """Build a benchmark problem by name.

    DTLZ problems accept an objective-count override; all others are fixed
    to their benchmark dimensions.
    """
    canonical = _ALIASES.get(name.upper(), name.upper())
    if canonical not in PROBLEM_NAMES:
        if canonical == "ZDT5":
            raise ValueError("ZDT5 is a binary-encoded problem and is not supported")
        raise ValueError(
            f"unknown problem '{name}'; valid names: {', '.join(PROBLEM_NAMES)}")
    if canonical in _DTLZ_NAMES:
        return dtlz.build(canonical, m=3 if objectives is None else objectives)
    if objectives is not None:
        raise ValueError(f"{canonical} does not support an objective-count override")
    if canonical in _ZDT_NAMES:
        return zdt.build(canonical)
    if canonical in _LZ09_NAMES:
        return lz09.build(canonical)
    if canonical in _WFG_NAMES:
        return wfg.build(canonical)
    return ksw.build(canonical)


def sample_true_pf(spec: ProblemSpec, count: int) -> TruePFSample:
    return spec.sample_true_pf(count)


__all__ = [
    "FrontSource",
    "PROBLEM_NAMES",
    "ProblemSpec",
    "TruePFSample",
    "make_problem",
    "sample_true_pf",
]
