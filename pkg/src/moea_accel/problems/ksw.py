"""Kursawe problem with 10 variables.

The optimal front has no closed form; a reference sample is bundled as a
data file (see tools/make_reference_front.py for how it was produced).
"""

from __future__ import annotations

import importlib.resources

import numpy as np

from .base import FrontSource, ProblemSpec, TruePFSample, downsample

_FRONT_FILE = "ksw10_front.txt"


def _ksw(x):
    f1 = np.sum(-10.0 * np.exp(-0.2 * np.sqrt(x[:-1] ** 2 + x[1:] ** 2)))
    f2 = np.sum(np.abs(x) ** 0.8 + 5.0 * np.sin(x ** 3))
    return np.array([f1, f2])


def load_reference_front(filename: str = _FRONT_FILE) -> np.ndarray:
    resource = importlib.resources.files("moea_accel.problems") / "data" / filename
    if not resource.is_file():
        raise FileNotFoundError(
            f"reference front file '{filename}' is missing from moea_accel/problems/data")
    with resource.open("r") as fh:
        return np.loadtxt(fh, ndmin=2)


def _front(count):
    pts = load_reference_front()
    pts = pts[np.argsort(pts[:, 0])]
    if count > len(pts):
        raise ValueError(
            f"bundled KSW10 front has {len(pts)} points; cannot sample {count}")
    return TruePFSample(downsample(pts, count), FrontSource.FILE_LOADED)


def build(name: str = "KSW10") -> ProblemSpec:
    n = 10
    resource = importlib.resources.files("moea_accel.problems") / "data" / _FRONT_FILE
    limit = None
    if resource.is_file():
        with resource.open("r") as fh:
            limit = sum(1 for line in fh if line.strip())
    return ProblemSpec("KSW10", n, 2, np.full(n, -5.0), np.full(n, 5.0), _ksw, _front,
                       front_size_limit=limit)
