"""Problem descriptors and shared front-sampling helpers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import nondominated_indices


class FrontSource(enum.Enum):
    ANALYTIC = "analytic"
    FILE_LOADED = "file"


@dataclass(frozen=True)
class TruePFSample:
    points: np.ndarray
    source: FrontSource


@dataclass(frozen=True)
class ProblemSpec:
    """A benchmark problem: dimensions, bounds, evaluator and front sampler.

    The evaluator is pure and deterministic; the sampler returns `count`
    mutually non-dominated points on the known optimal front. For
    file-backed fronts `front_size_limit` caps the sampleable count.
    """

    name: str
    n: int
    m: int
    lower: np.ndarray
    upper: np.ndarray
    _evaluator: Callable[[np.ndarray], np.ndarray]
    _pf_sampler: Callable[[int], TruePFSample]
    front_size_limit: int | None = None

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"{self.name}: expected {self.n} variables, got shape {x.shape}")
        if np.any(x < self.lower) or np.any(x > self.upper):
            raise ValueError(f"{self.name}: variables out of bounds")
        return np.asarray(self._evaluator(x), dtype=float)

    def sample_true_pf(self, count: int) -> TruePFSample:
        if count < 2:
            raise ValueError("count must be at least 2")
        return self._pf_sampler(count)

    def random_solution(self, rng) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=self.n)


def downsample(points: np.ndarray, count: int) -> np.ndarray:
    """Deterministically pick `count` evenly strided rows (requires len >= count)."""
    size = len(points)
    if size < count:
        raise ValueError(f"cannot downsample {size} points to {count}")
    idx = (np.arange(count) * size) // count
    return points[idx]


def filter_nondominated(points: np.ndarray) -> np.ndarray:
    return points[nondominated_indices(points)]


def simplex_lattice(m: int, count: int) -> np.ndarray:
    """At least `count` uniformly spaced weight vectors on the unit simplex."""
    h = 1
    while _lattice_size(h, m) < count:
        h += 1
    return _lattice_points(h, m)


def _lattice_size(h: int, m: int) -> int:
    from math import comb

    return comb(h + m - 1, m - 1)


def _lattice_points(h: int, m: int) -> np.ndarray:
    def rec(remaining: int, dims: int):
        if dims == 1:
            yield (remaining,)
            return
        for i in range(remaining + 1):
            for rest in rec(remaining - i, dims - 1):
                yield (i,) + rest

    pts = np.array(list(rec(h, m)), dtype=float) / h
    return pts


def unit_sphere_front(m: int, count: int) -> np.ndarray:
    """`count` points on the positive octant of the unit sphere."""
    weights = simplex_lattice(m, count)
    norms = np.linalg.norm(weights, axis=1, keepdims=True)
    pts = weights / norms
    return downsample(pts, count)
