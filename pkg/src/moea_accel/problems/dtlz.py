"""DTLZ scalable test problems, configured per the benchmark dimension table.

The objective count defaults to 3 and may be overridden (the variable count
follows as n = m + k - 1 with the per-problem distance-variable count k).
"""

from __future__ import annotations

import numpy as np

from .base import (
    FrontSource,
    ProblemSpec,
    TruePFSample,
    downsample,
    simplex_lattice,
    unit_sphere_front,
)

_K = {"DTLZ1": 5, "DTLZ2": 10, "DTLZ3": 10, "DTLZ4": 10, "DTLZ5": 10, "DTLZ6": 10, "DTLZ7": 20}


def _g_rastrigin(xm):
    return 100.0 * (len(xm) + np.sum((xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (xm - 0.5))))


def _g_sphere(xm):
    return np.sum((xm - 0.5) ** 2)


def _dtlz1(x, m):
    g = _g_rastrigin(x[m - 1:])
    f = np.empty(m)
    for i in range(m):
        val = 0.5 * (1.0 + g)
        val *= np.prod(x[: m - 1 - i])
        if i > 0:
            val *= 1.0 - x[m - 1 - i]
        f[i] = val
    return f


def _angles_to_objectives(theta, g, m):
    f = np.empty(m)
    for i in range(m):
        val = 1.0 + g
        val *= np.prod(np.cos(theta[: m - 1 - i]))
        if i > 0:
            val *= np.sin(theta[m - 1 - i])
        f[i] = val
    return f


def _dtlz2(x, m, alpha=1.0, g_fn=_g_sphere):
    g = g_fn(x[m - 1:])
    theta = 0.5 * np.pi * x[: m - 1] ** alpha
    return _angles_to_objectives(theta, g, m)


def _dtlz3(x, m):
    return _dtlz2(x, m, g_fn=_g_rastrigin)


def _dtlz4(x, m):
    return _dtlz2(x, m, alpha=100.0)


def _dtlz5_theta(x, m, g):
    theta = np.empty(m - 1)
    theta[0] = 0.5 * np.pi * x[0]
    theta[1:] = np.pi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[1: m - 1])
    return theta


def _dtlz5(x, m):
    g = _g_sphere(x[m - 1:])
    return _angles_to_objectives(_dtlz5_theta(x, m, g), g, m)


def _dtlz6(x, m):
    g = np.sum(x[m - 1:] ** 0.1)
    return _angles_to_objectives(_dtlz5_theta(x, m, g), g, m)


def _dtlz7(x, m):
    k = len(x) - m + 1
    g = 1.0 + 9.0 * np.sum(x[m - 1:]) / k
    f = np.empty(m)
    f[: m - 1] = x[: m - 1]
    h = m - np.sum(f[: m - 1] / (1.0 + g) * (1.0 + np.sin(3.0 * np.pi * f[: m - 1])))
    f[m - 1] = (1.0 + g) * h
    return f


def _simplex_front(m):
    def sampler(count):
        pts = 0.5 * simplex_lattice(m, count)
        return TruePFSample(downsample(pts, count), FrontSource.ANALYTIC)

    return sampler


def _sphere_front(m):
    def sampler(count):
        return TruePFSample(unit_sphere_front(m, count), FrontSource.ANALYTIC)

    return sampler


def _curve_front(m):
    # Degenerate front of DTLZ5/6: at the optimum every angle except the
    # first collapses to pi/4, leaving a one-parameter curve.
    def sampler(count):
        theta1 = np.linspace(0.0, 0.5 * np.pi, count)
        theta_rest = np.full(m - 2, 0.25 * np.pi)
        f = np.empty((count, m))
        for row, t1 in enumerate(theta1):
            theta = np.concatenate([[t1], theta_rest])
            f[row] = _angles_to_objectives(theta, 0.0, m)
        return TruePFSample(f, FrontSource.ANALYTIC)

    return sampler


def _dtlz7_front(m):
    def sampler(count):
        # At the optimum g = 1 and the last objective separates into
        # independent per-coordinate terms, so the non-dominated set is the
        # cartesian product of each coordinate's running-maximum locus.
        grid = np.linspace(0.0, 1.0, 4001)
        u = grid * (1.0 + np.sin(3.0 * np.pi * grid))
        record = u >= np.maximum.accumulate(u)
        efficient = grid[record]
        per_axis = max(2, int(np.ceil(count ** (1.0 / (m - 1)))) * 4)
        axis = downsample(efficient, min(per_axis, len(efficient)))
        mesh = np.meshgrid(*([axis] * (m - 1)), indexing="ij")
        lead = np.column_stack([g.ravel() for g in mesh])
        u_lead = lead * (1.0 + np.sin(3.0 * np.pi * lead))
        last = 2.0 * (m - np.sum(u_lead / 2.0, axis=1))
        pts = np.column_stack([lead, last])
        return TruePFSample(downsample(pts, count), FrontSource.ANALYTIC)

    return sampler


def build(name: str, m: int = 3) -> ProblemSpec:
    if m < 2:
        raise ValueError("DTLZ problems need at least 2 objectives")
    k = _K[name]
    n = m + k - 1
    evaluator = {
        "DTLZ1": _dtlz1,
        "DTLZ2": _dtlz2,
        "DTLZ3": _dtlz3,
        "DTLZ4": _dtlz4,
        "DTLZ5": _dtlz5,
        "DTLZ6": _dtlz6,
        "DTLZ7": _dtlz7,
    }[name]
    sampler = {
        "DTLZ1": _simplex_front,
        "DTLZ2": _sphere_front,
        "DTLZ3": _sphere_front,
        "DTLZ4": _sphere_front,
        "DTLZ5": _curve_front,
        "DTLZ6": _curve_front,
        "DTLZ7": _dtlz7_front,
    }[name](m)
    lower = np.zeros(n)
    upper = np.ones(n)
    return ProblemSpec(name, n, m, lower, upper, lambda x, _f=evaluator, _m=m: _f(x, _m), sampler)
