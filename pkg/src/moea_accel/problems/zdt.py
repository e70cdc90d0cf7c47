"""ZDT bi-objective test problems (ZDT5 is binary and not included)."""

from __future__ import annotations

import numpy as np

from .base import FrontSource, ProblemSpec, TruePFSample, downsample, filter_nondominated


def _zdt1(x):
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
    return np.array([f1, g * (1.0 - np.sqrt(f1 / g))])


def _zdt2(x):
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
    return np.array([f1, g * (1.0 - (f1 / g) ** 2)])


def _zdt3(x):
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
    h = 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)
    return np.array([f1, g * h])


def _zdt4(x):
    f1 = x[0]
    g = 1.0 + 10.0 * (len(x) - 1) + np.sum(x[1:] ** 2 - 10.0 * np.cos(4.0 * np.pi * x[1:]))
    return np.array([f1, g * (1.0 - np.sqrt(f1 / g))])


def _zdt6(x):
    f1 = 1.0 - np.exp(-4.0 * x[0]) * np.sin(6.0 * np.pi * x[0]) ** 6
    g = 1.0 + 9.0 * (np.sum(x[1:]) / (len(x) - 1)) ** 0.25
    return np.array([f1, g * (1.0 - (f1 / g) ** 2)])


def _sqrt_front(count):
    # f2 = 1 - sqrt(f1); parametrised as f1 = t^2 so points are evenly
    # spaced along f2.
    t = np.linspace(0.0, 1.0, count)
    return TruePFSample(np.column_stack([t ** 2, 1.0 - t]), FrontSource.ANALYTIC)


def _square_front(count):
    f1 = np.linspace(0.0, 1.0, count)
    return TruePFSample(np.column_stack([f1, 1.0 - f1 ** 2]), FrontSource.ANALYTIC)


def _zdt3_front(count):
    f1 = np.linspace(0.0, 1.0, max(count * 8, 4000))
    f2 = 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)
    pts = filter_nondominated(np.column_stack([f1, f2]))
    pts = pts[np.argsort(pts[:, 0])]
    return TruePFSample(downsample(pts, count), FrontSource.ANALYTIC)


def _zdt6_front(count):
    # The attainable f1 minimum has no closed form; locate it on a dense grid.
    x1 = np.linspace(0.0, 1.0, 2_000_001)
    f1_min = np.min(1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6)
    f1 = np.linspace(f1_min, 1.0, count)
    return TruePFSample(np.column_stack([f1, 1.0 - f1 ** 2]), FrontSource.ANALYTIC)


def build(name: str) -> ProblemSpec:
    table = {
        "ZDT1": (30, _zdt1, _sqrt_front, 0.0, 1.0),
        "ZDT2": (30, _zdt2, _square_front, 0.0, 1.0),
        "ZDT3": (10, _zdt3, _zdt3_front, 0.0, 1.0),
        "ZDT4": (10, _zdt4, _sqrt_front, None, None),
        "ZDT6": (10, _zdt6, _zdt6_front, 0.0, 1.0),
    }
    n, evaluator, sampler, lo, hi = table[name]
    if name == "ZDT4":
        lower = np.concatenate([[0.0], np.full(n - 1, -5.0)])
        upper = np.concatenate([[1.0], np.full(n - 1, 5.0)])
    else:
        lower = np.full(n, lo)
        upper = np.full(n, hi)
    return ProblemSpec(name, n, 2, lower, upper, evaluator, sampler)
