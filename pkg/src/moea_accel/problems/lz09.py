"""LZ09 test problems with complicated Pareto sets.

The bi-objective instances split the tail variables into odd- and
even-indexed groups whose optimal values trace a curve through the search
space; the optimal fronts themselves have simple closed forms.
"""

from __future__ import annotations

import numpy as np

from .base import FrontSource, ProblemSpec, TruePFSample, unit_sphere_front

_DIMS = {
    "LZ09_F1": (30, 2),
    "LZ09_F2": (30, 2),
    "LZ09_F3": (30, 2),
    "LZ09_F4": (30, 2),
    "LZ09_F5": (30, 2),
    "LZ09_F6": (30, 3),
    "LZ09_F7": (10, 2),
    "LZ09_F8": (10, 2),
    "LZ09_F9": (30, 2),
}


def _groups(n):
    j = np.arange(2, n + 1)
    return j[j % 2 == 1], j[j % 2 == 0]  # odd (for f1), even (for f2)


def _power_targets(x1, j, n):
    return x1 ** (0.5 * (1.0 + 3.0 * (j - 2.0) / (n - 2.0)))


def _mean_sq(y):
    return 2.0 * np.mean(y ** 2)


def _f1_style(x, offsets_fn):
    n = len(x)
    j1, j2 = _groups(n)
    y1, y2 = offsets_fn(x, j1, j2, n)
    return np.array([x[0] + _mean_sq(y1), 1.0 - np.sqrt(x[0]) + _mean_sq(y2)])


def _lz1(x):
    def offsets(x, j1, j2, n):
        return (x[j1 - 1] - _power_targets(x[0], j1, n),
                x[j2 - 1] - _power_targets(x[0], j2, n))

    return _f1_style(x, offsets)


def _lz2(x):
    def offsets(x, j1, j2, n):
        return (x[j1 - 1] - np.sin(6.0 * np.pi * x[0] + j1 * np.pi / n),
                x[j2 - 1] - np.sin(6.0 * np.pi * x[0] + j2 * np.pi / n))

    return _f1_style(x, offsets)


def _lz3(x):
    def offsets(x, j1, j2, n):
        return (x[j1 - 1] - 0.8 * x[0] * np.cos(6.0 * np.pi * x[0] + j1 * np.pi / n),
                x[j2 - 1] - 0.8 * x[0] * np.sin(6.0 * np.pi * x[0] + j2 * np.pi / n))

    return _f1_style(x, offsets)


def _lz4(x):
    def offsets(x, j1, j2, n):
        return (x[j1 - 1] - 0.8 * x[0] * np.cos((6.0 * np.pi * x[0] + j1 * np.pi / n) / 3.0),
                x[j2 - 1] - 0.8 * x[0] * np.sin(6.0 * np.pi * x[0] + j2 * np.pi / n))

    return _f1_style(x, offsets)


def _lz5(x):
    def offsets(x, j1, j2, n):
        amp1 = 0.3 * x[0] ** 2 * np.cos(24.0 * np.pi * x[0] + 4.0 * j1 * np.pi / n) + 0.6 * x[0]
        amp2 = 0.3 * x[0] ** 2 * np.cos(24.0 * np.pi * x[0] + 4.0 * j2 * np.pi / n) + 0.6 * x[0]
        return (x[j1 - 1] - amp1 * np.cos(6.0 * np.pi * x[0] + j1 * np.pi / n),
                x[j2 - 1] - amp2 * np.sin(6.0 * np.pi * x[0] + j2 * np.pi / n))

    return _f1_style(x, offsets)


def _lz6(x):
    n = len(x)
    j = np.arange(3, n + 1)
    groups = (j[(j - 1) % 3 == 0], j[(j - 2) % 3 == 0], j[j % 3 == 0])
    terms = [_mean_sq(x[g - 1] - 2.0 * x[1] * np.sin(2.0 * np.pi * x[0] + g * np.pi / n))
             for g in groups]
    f1 = np.cos(0.5 * np.pi * x[0]) * np.cos(0.5 * np.pi * x[1]) + terms[0]
    f2 = np.cos(0.5 * np.pi * x[0]) * np.sin(0.5 * np.pi * x[1]) + terms[1]
    f3 = np.sin(0.5 * np.pi * x[0]) + terms[2]
    return np.array([f1, f2, f3])


def _lz7(x):
    n = len(x)
    j1, j2 = _groups(n)
    y1 = x[j1 - 1] - _power_targets(x[0], j1, n)
    y2 = x[j2 - 1] - _power_targets(x[0], j2, n)
    h1 = 4.0 * y1 ** 2 - np.cos(8.0 * np.pi * y1) + 1.0
    h2 = 4.0 * y2 ** 2 - np.cos(8.0 * np.pi * y2) + 1.0
    return np.array([x[0] + 2.0 * np.mean(h1), 1.0 - np.sqrt(x[0]) + 2.0 * np.mean(h2)])


def _lz8(x):
    n = len(x)
    j1, j2 = _groups(n)
    y1 = x[j1 - 1] - _power_targets(x[0], j1, n)
    y2 = x[j2 - 1] - _power_targets(x[0], j2, n)

    def term(y, j):
        return (4.0 * np.sum(y ** 2)
                - 2.0 * np.prod(np.cos(20.0 * y * np.pi / np.sqrt(j)))
                + 2.0)

    return np.array([x[0] + 2.0 / len(j1) * term(y1, j1),
                     1.0 - np.sqrt(x[0]) + 2.0 / len(j2) * term(y2, j2)])


def _lz9(x):
    n = len(x)
    j1, j2 = _groups(n)
    y1 = x[j1 - 1] - np.sin(6.0 * np.pi * x[0] + j1 * np.pi / n)
    y2 = x[j2 - 1] - np.sin(6.0 * np.pi * x[0] + j2 * np.pi / n)
    return np.array([x[0] + _mean_sq(y1), 1.0 - x[0] ** 2 + _mean_sq(y2)])


def _sqrt_front(count):
    t = np.linspace(0.0, 1.0, count)
    return TruePFSample(np.column_stack([t ** 2, 1.0 - t]), FrontSource.ANALYTIC)


def _square_front(count):
    f1 = np.linspace(0.0, 1.0, count)
    return TruePFSample(np.column_stack([f1, 1.0 - f1 ** 2]), FrontSource.ANALYTIC)


def _sphere_front(count):
    return TruePFSample(unit_sphere_front(3, count), FrontSource.ANALYTIC)


def build(name: str) -> ProblemSpec:
    n, m = _DIMS[name]
    evaluator = {
        "LZ09_F1": _lz1, "LZ09_F2": _lz2, "LZ09_F3": _lz3, "LZ09_F4": _lz4,
        "LZ09_F5": _lz5, "LZ09_F6": _lz6, "LZ09_F7": _lz7, "LZ09_F8": _lz8,
        "LZ09_F9": _lz9,
    }[name]
    if name == "LZ09_F1" or name in ("LZ09_F7", "LZ09_F8"):
        lower, upper = np.zeros(n), np.ones(n)
    elif name == "LZ09_F6":
        lower = np.concatenate([[0.0, 0.0], np.full(n - 2, -2.0)])
        upper = np.concatenate([[1.0, 1.0], np.full(n - 2, 2.0)])
    else:
        lower = np.concatenate([[0.0], np.full(n - 1, -1.0)])
        upper = np.concatenate([[1.0], np.full(n - 1, 1.0)])
    sampler = _sphere_front if name == "LZ09_F6" else (
        _square_front if name == "LZ09_F9" else _sqrt_front)
    return ProblemSpec(name, n, m, lower, upper, evaluator, sampler)
