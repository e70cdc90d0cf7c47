"""Quality indicators: hypervolume, relative hypervolume, IGD, spread, and
the Mann-Whitney U test used for solver comparisons.

All objectives are minimised and hypervolumes are measured against an
anti-optimal reference point.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass

import numpy as np

from .problems.base import ProblemSpec, TruePFSample

logger = logging.getLogger(__name__)


# --- hypervolume -------------------------------------------------------------

def _strictly_inside(front: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return front[np.all(front < ref, axis=1)]


def _hv2(front: np.ndarray, ref: np.ndarray) -> float:
    """Exact bi-objective hypervolume by a dimension sweep."""
    pts = _strictly_inside(front, ref)
    if len(pts) == 0:
        return 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    area = 0.0
    best_f2 = ref[1]
    for f1, f2 in pts:
        if f2 < best_f2:
            area += (ref[0] - f1) * (best_f2 - f2)
            best_f2 = f2
    return float(area)


class _Staircase:
    """2D non-dominated staircase with an incrementally maintained area."""

    def __init__(self, ref_x: float, ref_y: float):
        self.ref_x = ref_x
        self.ref_y = ref_y
        self.xs: list[float] = []
        self.ys: list[float] = []
        self.area = 0.0

    def insert(self, x: float, y: float) -> None:
        xs, ys = self.xs, self.ys
        idx = bisect.bisect_left(xs, x)
        # A staircase point at or left of x with y <= y dominates the insert.
        if idx > 0 and ys[idx - 1] <= y:
            return
        if idx < len(xs) and xs[idx] == x and ys[idx] <= y:
            return
        # Remove now-dominated points (contiguous run with y >= new y).
        end = idx
        while end < len(xs) and ys[end] >= y:
            end += 1
        old_next = xs[idx] if idx < len(xs) else self.ref_x
        removed_area = 0.0
        for j in range(idx, end):
            nxt = xs[j + 1] if j + 1 < end else (xs[end] if end < len(xs) else self.ref_x)
            removed_area += (nxt - xs[j]) * (self.ref_y - ys[j])
        if idx > 0:
            # The left neighbour's strip now ends at the new point.
            self.area += (x - old_next) * (self.ref_y - ys[idx - 1])
        next_x = xs[end] if end < len(xs) else self.ref_x
        self.area += (next_x - x) * (self.ref_y - y) - removed_area
        del xs[idx:end]
        del ys[idx:end]
        xs.insert(idx, x)
        ys.insert(idx, y)


def _hv3(front: np.ndarray, ref: np.ndarray) -> float:
    """Tri-objective hypervolume: sweep the last objective, slicing into
    incrementally maintained 2D areas."""
    pts = _strictly_inside(front, ref)
    if len(pts) == 0:
        return 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0], pts[:, 2]))
    pts = pts[order]
    stair = _Staircase(float(ref[0]), float(ref[1]))
    vol = 0.0
    prev_z = None
    for x, y, z in pts:
        if prev_z is not None and z > prev_z:
            vol += stair.area * (z - prev_z)
        if prev_z is None or z > prev_z:
            prev_z = z
        stair.insert(float(x), float(y))
    vol += stair.area * (float(ref[2]) - prev_z)
    return float(vol)


def _hv_slice_recursive(front: np.ndarray, ref: np.ndarray) -> float:
    """Generic recursive slicing on the last objective (used for m = 4)."""
    pts = _strictly_inside(front, ref)
    if len(pts) == 0:
        return 0.0
    m = pts.shape[1]
    if m == 2:
        return _hv2(pts, ref)
    if m == 3:
        return _hv3(pts, ref)
    order = np.argsort(pts[:, -1], kind="stable")
    pts = pts[order]
    zs = pts[:, -1]
    vol = 0.0
    for i in range(len(pts)):
        if i + 1 < len(pts) and zs[i + 1] == zs[i]:
            continue
        upper = zs[i + 1] if i + 1 < len(pts) else ref[-1]
        thickness = upper - zs[i]
        if thickness > 0:
            vol += thickness * _hv_slice_recursive(pts[: i + 1, :-1], ref[:-1])
    return float(vol)


def hypervolume(front: np.ndarray, ref: np.ndarray) -> float:
    """Exact dominated hypervolume of `front` with respect to `ref`.

    Supports 2 to 4 objectives; points that do not strictly dominate the
    reference point contribute nothing. An empty effective front yields 0.
    """
    front = np.atleast_2d(np.asarray(front, dtype=float))
    ref = np.asarray(ref, dtype=float)
    m = ref.shape[0]
    if front.size == 0:
        return 0.0
    if front.shape[1] != m:
        raise ValueError("front and reference point dimension mismatch")
    if m == 2:
        return _hv2(front, ref)
    if m == 3:
        return _hv3(front, ref)
    if m == 4:
        return _hv_slice_recursive(front, ref)
    raise ValueError("hypervolume supports 2 to 4 objectives")


# --- indicator context and relative hypervolume ------------------------------

@dataclass(frozen=True)
class IndicatorContext:
    """Per-problem baseline for relative hypervolume and IGD."""

    reference_point: np.ndarray
    true_pf: TruePFSample
    h_true: float


def reference_point_for(front: np.ndarray) -> np.ndarray:
    """Anti-optimal reference point: 10% beyond the nadir in every objective.

    Zero nadir components are offset by 0.1; negative components move 10% of
    their magnitude toward worse (larger) values.
    """
    nadir = np.max(np.asarray(front, dtype=float), axis=0)
    offset = np.where(nadir == 0.0, 0.1, 0.1 * np.abs(nadir))
    return nadir + offset


_CONTEXT_CACHE: dict[tuple, IndicatorContext] = {}


def make_context(problem: ProblemSpec, sample_size: int = 5000) -> IndicatorContext:
    """Build (and cache) the indicator context for a problem."""
    key = (problem.name, problem.m, sample_size)
    hit = _CONTEXT_CACHE.get(key)
    if hit is not None:
        return hit
    sample = problem.sample_true_pf(sample_size)
    ref = reference_point_for(sample.points)
    h_true = hypervolume(sample.points, ref)
    if h_true <= 0:
        raise ValueError(f"{problem.name}: true front hypervolume is not positive")
    ctx = IndicatorContext(ref, sample, h_true)
    _CONTEXT_CACHE[key] = ctx
    return ctx


def relative_hv(front: np.ndarray, ctx: IndicatorContext) -> float:
    """Hypervolume as a percentage of the true front's, clamped to 100."""
    value = 100.0 * hypervolume(front, ctx.reference_point) / ctx.h_true
    if value > 100.0:
        logger.info("relative hypervolume %.6f clamped to 100", value)
        return 100.0
    return value


# --- IGD and spread -----------------------------------------------------------

def igd(front: np.ndarray, true_pf: np.ndarray) -> float:
    """Mean distance from each true-front point to its nearest front point."""
    front = np.atleast_2d(np.asarray(front, dtype=float))
    if front.size == 0:
        raise ValueError("front must be non-empty")
    true_pf = np.asarray(true_pf, dtype=float)
    diffs = true_pf[:, None, :] - front[None, :, :]
    dists = np.sqrt(np.sum(diffs ** 2, axis=2))
    return float(np.mean(np.min(dists, axis=1)))


def normalize_igd(values) -> np.ndarray:
    """Per-problem minmax normalisation of a batch of IGD values to [0, 1]."""
    vals = np.asarray(values, dtype=float)
    span = vals.max() - vals.min()
    if span == 0:
        return np.zeros_like(vals)
    return (vals - vals.min()) / span


def spread_delta(front: np.ndarray, true_pf: np.ndarray) -> float:
    """Distribution uniformity of a front (smaller is more even).

    For two objectives this is the consecutive-gap formulation anchored at
    the true-front extremes; for three or more it generalises to
    nearest-neighbour gaps against the per-objective extreme points.
    """
    front = np.atleast_2d(np.asarray(front, dtype=float))
    true_pf = np.asarray(true_pf, dtype=float)
    m = front.shape[1]
    if m == 2:
        order = np.lexsort((front[:, 1], front[:, 0]))
        pts = front[order]
        ext_first = true_pf[np.argmin(true_pf[:, 0])]
        ext_last = true_pf[np.argmax(true_pf[:, 0])]
        d_f = float(np.linalg.norm(pts[0] - ext_first))
        d_l = float(np.linalg.norm(pts[-1] - ext_last))
        if len(pts) == 1:
            denom = d_f + d_l
            return (d_f + d_l) / denom if denom > 0 else 0.0
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        mean_gap = float(np.mean(gaps))
        num = d_f + d_l + float(np.sum(np.abs(gaps - mean_gap)))
        denom = d_f + d_l + (len(pts) - 1) * mean_gap
        return num / denom if denom > 0 else 0.0
    # Generalised variant: extreme distances per objective plus
    # nearest-neighbour gap dispersion.
    ext_dists = []
    for j in range(m):
        ext = true_pf[np.argmin(true_pf[:, j])]
        ext_dists.append(float(np.min(np.linalg.norm(front - ext, axis=1))))
    if len(front) == 1:
        denom = sum(ext_dists)
        return sum(ext_dists) / denom if denom > 0 else 0.0
    diffs = front[:, None, :] - front[None, :, :]
    dmat = np.sqrt(np.sum(diffs ** 2, axis=2))
    np.fill_diagonal(dmat, np.inf)
    gaps = np.min(dmat, axis=1)
    mean_gap = float(np.mean(gaps))
    num = sum(ext_dists) + float(np.sum(np.abs(gaps - mean_gap)))
    denom = sum(ext_dists) + len(front) * mean_gap
    return num / denom if denom > 0 else 0.0


# --- Mann-Whitney U test --------------------------------------------------------

def _u_count_distribution(n1: int, n2: int) -> np.ndarray:
    """counts[u] = number of rank arrangements of (n1, n2) with U statistic u.

    Recurrence on the largest-ranked observation: if it belongs to the first
    sample it adds n2 pairs to U, otherwise none.
    """
    max_u = n1 * n2
    table = {(0, 0): np.array([1.0])}
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            if (i, j) in table:
                continue
            counts = np.zeros(i * j + 1)
            if i > 0:
                prev = table[(i - 1, j)]
                counts[j:j + len(prev)] += prev
            if j > 0:
                prev = table[(i, j - 1)]
                counts[: len(prev)] += prev
            table[(i, j)] = counts
    full = np.zeros(max_u + 1)
    got = table[(n1, n2)]
    full[: len(got)] = got
    return full


def mann_whitney_u(sample_a, sample_b, alternative: str) -> float:
    """One-sided Mann-Whitney U test p-value.

    `alternative` is "a_less" (a shifted below b) or "a_greater". Tie-free
    inputs with at most 20 observations use exact enumeration; larger or
    tied inputs use the normal approximation with tie and continuity
    corrections.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("samples must be non-empty")
    if alternative not in ("a_less", "a_greater"):
        raise ValueError("alternative must be 'a_less' or 'a_greater'")
    n1, n2 = len(a), len(b)
    combined = np.concatenate([a, b])
    order = np.argsort(combined, kind="stable")
    ranks = np.empty(len(combined))
    ranks[order] = np.arange(1, len(combined) + 1)
    # Midranks for ties.
    vals, inverse, tie_counts = np.unique(combined, return_inverse=True, return_counts=True)
    if np.any(tie_counts > 1):
        cum = np.cumsum(tie_counts)
        midranks = cum - (tie_counts - 1) / 2.0
        ranks = midranks[inverse]
    r1 = float(np.sum(ranks[:n1]))
    u_a = r1 - n1 * (n1 + 1) / 2.0  # number of (a, b) pairs with a > b (+ half-ties)
    has_ties = bool(np.any(tie_counts > 1))

    if not has_ties and n1 + n2 <= 20:
        counts = _u_count_distribution(n1, n2)
        total = counts.sum()
        u_int = int(round(u_a))
        if alternative == "a_less":
            return float(counts[: u_int + 1].sum() / total)
        return float(counts[u_int:].sum() / total)

    mean_u = n1 * n2 / 2.0
    n = n1 + n2
    tie_term = float(np.sum(tie_counts ** 3 - tie_counts)) / (n * (n - 1)) if n > 1 else 0.0
    var_u = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var_u <= 0:
        return 1.0
    sd = math.sqrt(var_u)
    if alternative == "a_less":
        z = (u_a - mean_u + 0.5) / sd
        return float(_norm_cdf(z))
    z = (u_a - mean_u - 0.5) / sd
    return float(1.0 - _norm_cdf(z))


def _norm_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))
