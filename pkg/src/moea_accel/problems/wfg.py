"""WFG test problems in their 6-variable, bi-objective benchmark configuration.

Each problem composes the suite's transformation pipeline (shift, bias,
reduction) with a front shape. The position/distance split uses one position
parameter (k = 1), except WFG2 and WFG3 whose pairwise non-separable
reduction needs an even number of distance parameters (k = 2, l = 4); the
split is recorded in WFG_K and asserted in tests.
"""

from __future__ import annotations

import numpy as np

from .base import FrontSource, ProblemSpec, TruePFSample, downsample, filter_nondominated

N_VARS = 6
N_OBJS = 2

WFG_K = {
    "WFG1": 1, "WFG2": 2, "WFG3": 2, "WFG4": 1, "WFG5": 1,
    "WFG6": 1, "WFG7": 1, "WFG8": 1, "WFG9": 1,
}


def _clip01(v):
    return np.clip(v, 0.0, 1.0)


# --- transformations -------------------------------------------------------

def _s_linear(y, a):
    return _clip01(np.abs(y - a) / np.abs(np.floor(a - y) + a))


def _s_deceptive(y, a, b, c):
    tmp1 = np.floor(y - a + b) * (1.0 - c + (a - b) / b) / (a - b)
    tmp2 = np.floor(a + b - y) * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b)
    return _clip01(1.0 + (np.abs(y - a) - b) * (tmp1 + tmp2 + 1.0 / b))


def _s_multimodal(y, a, b, c):
    tmp1 = np.abs(y - c) / (2.0 * (np.floor(c - y) + c))
    tmp2 = (4.0 * a + 2.0) * np.pi * (0.5 - tmp1)
    return _clip01((1.0 + np.cos(tmp2) + 4.0 * b * tmp1 ** 2) / (b + 2.0))


def _b_flat(y, a, b, c):
    return _clip01(a + np.minimum(0.0, np.floor(y - b)) * (a * (b - y) / b)
                   - np.minimum(0.0, np.floor(c - y)) * ((1.0 - a) * (y - c) / (1.0 - c)))


def _b_poly(y, alpha):
    return _clip01(y ** alpha)


def _b_param(y, u, a, b, c):
    v = a - (1.0 - 2.0 * u) * np.abs(np.floor(0.5 - u) + a)
    return _clip01(y ** (b + (c - b) * v))


# --- reductions -------------------------------------------------------------

def _r_sum(y, w):
    return _clip01(float(np.dot(y, w) / np.sum(w)))


def _r_mean(y):
    return _clip01(float(np.mean(y)))


def _r_nonsep(y, a):
    size = len(y)
    num = 0.0
    for j in range(size):
        num += y[j]
        for k in range(a - 1):
            num += abs(y[j] - y[(1 + j + k) % size])
    half = np.ceil(a / 2.0)
    denom = size * half * (1.0 + 2.0 * a - 2.0 * half) / a
    return _clip01(num / denom)


# --- shapes (position vector of length M-1, objective index 1-based) --------

def _shape_concave(xp, m, big_m):
    if m == 1:
        return _clip01(float(np.prod(np.sin(0.5 * np.pi * xp))))
    head = float(np.prod(np.sin(0.5 * np.pi * xp[: big_m - m])))
    return _clip01(head * np.cos(0.5 * np.pi * xp[big_m - m]))


def _shape_convex(xp, m, big_m):
    if m == 1:
        return _clip01(float(np.prod(1.0 - np.cos(0.5 * np.pi * xp))))
    head = float(np.prod(1.0 - np.cos(0.5 * np.pi * xp[: big_m - m])))
    return _clip01(head * (1.0 - np.sin(0.5 * np.pi * xp[big_m - m])))


def _shape_linear(xp, m, big_m):
    if m == 1:
        return _clip01(float(np.prod(xp)))
    head = float(np.prod(xp[: big_m - m]))
    return _clip01(head * (1.0 - xp[big_m - m]))


def _shape_mixed(x1, a=5.0, alpha=1.0):
    aux = 2.0 * a * np.pi
    return _clip01((1.0 - x1 - np.cos(aux * x1 + 0.5 * np.pi) / aux) ** alpha)


def _shape_disconnected(x1, alpha=1.0, beta=1.0, a=5.0):
    return _clip01(1.0 - x1 ** alpha * np.cos(a * np.pi * x1 ** beta) ** 2)


# --- common assembly ---------------------------------------------------------

def _post(t, big_m):
    # Degenerate-front weights are all ones here (WFG3's zeroed entries only
    # matter for three or more objectives).
    x = np.empty(big_m)
    for i in range(big_m - 1):
        x[i] = max(t[-1], 1.0) * (t[i] - 0.5) + 0.5
    x[big_m - 1] = t[-1]
    return x


def _scale(x, hs, big_m):
    s = 2.0 * np.arange(1, big_m + 1)
    return x[big_m - 1] + s * np.asarray(hs)


def _normalise(z, n):
    return z / (2.0 * np.arange(1, n + 1))


def _position_groups(y, k, big_m):
    gap = k // (big_m - 1)
    return [y[i * gap:(i + 1) * gap] for i in range(big_m - 1)]


def _concave_objectives(t, big_m):
    x = _post(t, big_m)
    hs = [_shape_concave(x[:-1], m, big_m) for m in range(1, big_m + 1)]
    return _scale(x, hs, big_m)


# --- problem evaluators ------------------------------------------------------

def _wfg1(z, n, k, big_m):
    w = 2.0 * np.arange(1, n + 1)
    y = _normalise(z, n)
    y = np.concatenate([y[:k], _s_linear(y[k:], 0.35)])
    y = np.concatenate([y[:k], _b_flat(y[k:], 0.8, 0.75, 0.85)])
    y = _b_poly(y, 0.02)
    gap = k // (big_m - 1)
    t = [
        _r_sum(y[i * gap:(i + 1) * gap], w[i * gap:(i + 1) * gap])
        for i in range(big_m - 1)
    ]
    t.append(_r_sum(y[k:], w[k:]))
    x = _post(np.asarray(t), big_m)
    hs = [_shape_convex(x[:-1], m, big_m) for m in range(1, big_m)]
    hs.append(_shape_mixed(x[0]))
    return _scale(x, hs, big_m)


def _wfg2_t23(y, n, k):
    half = (n - k) // 2
    reduced = [y[i] for i in range(k)]
    for i in range(half):
        reduced.append(_r_nonsep(y[k + 2 * i:k + 2 * i + 2], 2))
    y2 = np.asarray(reduced)
    t = [_r_mean(g) for g in _position_groups(y2, k, N_OBJS)]
    t.append(_r_mean(y2[k:k + half]))
    return np.asarray(t)


def _wfg2(z, n, k, big_m):
    y = _normalise(z, n)
    y = np.concatenate([y[:k], _s_linear(y[k:], 0.35)])
    t = _wfg2_t23(y, n, k)
    x = _post(t, big_m)
    hs = [_shape_convex(x[:-1], m, big_m) for m in range(1, big_m)]
    hs.append(_shape_disconnected(x[0]))
    return _scale(x, hs, big_m)


def _wfg3(z, n, k, big_m):
    y = _normalise(z, n)
    y = np.concatenate([y[:k], _s_linear(y[k:], 0.35)])
    t = _wfg2_t23(y, n, k)
    x = _post(t, big_m)
    hs = [_shape_linear(x[:-1], m, big_m) for m in range(1, big_m + 1)]
    return _scale(x, hs, big_m)


def _mean_reduce_t(y, k, big_m):
    t = [_r_mean(g) for g in _position_groups(y, k, big_m)]
    t.append(_r_mean(y[k:]))
    return np.asarray(t)


def _wfg4(z, n, k, big_m):
    y = _s_multimodal(_normalise(z, n), 30.0, 10.0, 0.35)
    return _concave_objectives(_mean_reduce_t(y, k, big_m), big_m)


def _wfg5(z, n, k, big_m):
    y = _s_deceptive(_normalise(z, n), 0.35, 0.001, 0.05)
    return _concave_objectives(_mean_reduce_t(y, k, big_m), big_m)


def _wfg6(z, n, k, big_m):
    y = _normalise(z, n)
    y = np.concatenate([y[:k], _s_linear(y[k:], 0.35)])
    gap = k // (big_m - 1)
    t = [_r_nonsep(g, gap) for g in _position_groups(y, k, big_m)]
    t.append(_r_nonsep(y[k:], n - k))
    return _concave_objectives(np.asarray(t), big_m)


def _wfg7(z, n, k, big_m):
    y = _normalise(z, n)
    y = y.copy()
    for i in range(k):
        y[i] = _b_param(y[i], _r_mean(y[i + 1:]), 0.98 / 49.98, 0.02, 50.0)
    y = np.concatenate([y[:k], _s_linear(y[k:], 0.35)])
    return _concave_objectives(_mean_reduce_t(y, k, big_m), big_m)


def _wfg8(z, n, k, big_m):
    y = _normalise(z, n).copy()
    for i in range(k, n):
        y[i] = _b_param(y[i], _r_mean(y[:i]), 0.98 / 49.98, 0.02, 50.0)
    y = np.concatenate([y[:k], _s_linear(y[k:], 0.35)])
    return _concave_objectives(_mean_reduce_t(y, k, big_m), big_m)


def _wfg9(z, n, k, big_m):
    y = _normalise(z, n).copy()
    for i in range(n - 1):
        y[i] = _b_param(y[i], _r_mean(y[i + 1:]), 0.98 / 49.98, 0.02, 50.0)
    y = np.concatenate([
        _s_deceptive(y[:k], 0.35, 0.001, 0.05),
        _s_multimodal(y[k:], 30.0, 95.0, 0.35),
    ])
    gap = k // (big_m - 1)
    t = [_r_nonsep(g, gap) for g in _position_groups(y, k, big_m)]
    t.append(_r_nonsep(y[k:], n - k))
    return _concave_objectives(np.asarray(t), big_m)


_EVALUATORS = {
    "WFG1": _wfg1, "WFG2": _wfg2, "WFG3": _wfg3, "WFG4": _wfg4, "WFG5": _wfg5,
    "WFG6": _wfg6, "WFG7": _wfg7, "WFG8": _wfg8, "WFG9": _wfg9,
}


# --- true fronts (bi-objective) ----------------------------------------------

def _curve_front(h1_fn, h2_fn, needs_filter):
    def sampler(count):
        t = np.linspace(0.0, 1.0, max(count * 8, 4000))
        pts = np.column_stack([2.0 * h1_fn(t), 4.0 * h2_fn(t)])
        if needs_filter:
            pts = filter_nondominated(pts)
            pts = pts[np.argsort(pts[:, 0])]
        return TruePFSample(downsample(pts, count), FrontSource.ANALYTIC)

    return sampler


def _front_sampler(name):
    convex1 = lambda t: 1.0 - np.cos(0.5 * np.pi * t)
    if name == "WFG1":
        return _curve_front(convex1, _shape_mixed, needs_filter=True)
    if name == "WFG2":
        return _curve_front(convex1, _shape_disconnected, needs_filter=True)
    if name == "WFG3":
        return _curve_front(lambda t: t, lambda t: 1.0 - t, needs_filter=False)
    return _curve_front(lambda t: np.sin(0.5 * np.pi * t),
                        lambda t: np.cos(0.5 * np.pi * t), needs_filter=False)


def build(name: str) -> ProblemSpec:
    n, m, k = N_VARS, N_OBJS, WFG_K[name]
    evaluator = _EVALUATORS[name]
    lower = np.zeros(n)
    upper = 2.0 * np.arange(1, n + 1, dtype=float)
    return ProblemSpec(name, n, m, lower, upper,
                       lambda x, _f=evaluator: _f(x, n, k, m), _front_sampler(name))
