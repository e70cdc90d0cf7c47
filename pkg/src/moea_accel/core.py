"""Evolutionary primitives shared by the hosts and the inner loop.

Solutions, populations, Pareto dominance, non-dominated sorting, crowding
distance, and the real-coded variation operators (SBX, polynomial mutation,
differential-evolution crossover, binary tournament). All objectives are
minimised.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .rng import RandomStream


class Origin(enum.Enum):
    HOST_OPERATOR = "host"
    SURROGATE_ACCELERATOR = "surrogate"


class EvalKind(enum.Enum):
    UNEVALUATED = "unevaluated"
    TRUE_FITNESS = "true"
    SURROGATE_ESTIMATE = "estimate"


@dataclass(frozen=True)
class SolutionRecord:
    """One candidate solution.

    `origin` and `birth_generation` are fixed at creation; evaluation
    produces a new record rather than mutating this one.
    """

    variables: np.ndarray
    origin: Origin
    birth_generation: int
    objectives: np.ndarray | None = None
    eval_kind: EvalKind = EvalKind.UNEVALUATED

    def __post_init__(self):
        if self.birth_generation < 0:
            raise ValueError("birth_generation must be nonnegative")
        has_obj = self.objectives is not None
        if has_obj != (self.eval_kind != EvalKind.UNEVALUATED):
            raise ValueError("objectives must be present iff the record is evaluated")

    def evaluated(self, objectives: np.ndarray, kind: EvalKind) -> "SolutionRecord":
        """Return a copy carrying the given objective vector."""
        if kind == EvalKind.UNEVALUATED:
            raise ValueError("evaluated() requires a non-unevaluated kind")
        return SolutionRecord(self.variables, self.origin, self.birth_generation,
                              np.asarray(objectives, dtype=float), kind)

    def reset_unevaluated(self) -> "SolutionRecord":
        """Drop any objective values, keeping variables, origin and birth tag."""
        return SolutionRecord(self.variables, self.origin, self.birth_generation)


@dataclass
class Population:
    """An ordered, capacity-bounded collection of solutions."""

    members: list[SolutionRecord] = field(default_factory=list)
    capacity: int = 0

    def __post_init__(self):
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if len(self.members) > self.capacity:
            raise ValueError("population exceeds capacity")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def objectives_matrix(self) -> np.ndarray:
        """Stack member objectives; raises if any member is unevaluated."""
        rows = []
        for m in self.members:
            if m.objectives is None:
                raise ValueError("population contains an unevaluated member")
            rows.append(m.objectives)
        return np.asarray(rows, dtype=float)

    def variables_matrix(self) -> np.ndarray:
        return np.asarray([m.variables for m in self.members], dtype=float)


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """Pareto dominance under minimisation.

    True iff `a` is no worse than `b` in every objective and strictly
    better in at least one.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"objective length mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(objs: np.ndarray) -> np.ndarray:
    """D[i, j] is True iff row i dominates row j."""
    a = objs[:, None, :]
    b = objs[None, :, :]
    return np.all(a <= b, axis=2) & np.any(a < b, axis=2)


def fast_nondominated_sort(objs_or_pop) -> list[list[int]]:
    """Partition solutions into non-domination fronts (front 0 first).

    Accepts a Population or an (N, m) objective matrix and returns lists of
    member indices.
    """
    if isinstance(objs_or_pop, Population):
        objs = objs_or_pop.objectives_matrix()
    else:
        objs = np.asarray(objs_or_pop, dtype=float)
    n = len(objs)
    if n == 0:
        return []
    dom = dominance_matrix(objs)
    remaining = np.ones(n, dtype=bool)
    fronts: list[list[int]] = []
    while remaining.any():
        idx = np.flatnonzero(remaining)
        counts = dom[np.ix_(idx, idx)].sum(axis=0)
        front = idx[counts == 0]
        fronts.append([int(i) for i in front])
        remaining[front] = False
    return fronts


def ranks_from_fronts(fronts: list[list[int]], n: int) -> np.ndarray:
    ranks = np.empty(n, dtype=int)
    for r, front in enumerate(fronts):
        for i in front:
            ranks[i] = r
    return ranks


def crowding_distance(front_objs: np.ndarray) -> np.ndarray:
    """Crowding distance of each point within one front.

    Boundary points per objective get +inf; interior points sum the
    normalised gap (next - previous) / (max - min) over objectives, with a
    zero objective range contributing nothing.
    """
    objs = np.asarray(front_objs, dtype=float)
    n = len(objs)
    if n == 0:
        raise ValueError("front must be non-empty")
    dist = np.zeros(n)
    for j in range(objs.shape[1]):
        order = np.argsort(objs[:, j], kind="stable")
        col = objs[order, j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = col[-1] - col[0]
        if span > 0 and n > 2:
            gaps = (col[2:] - col[:-2]) / span
            dist[order[1:-1]] += gaps
    return dist


def clip_to_bounds(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return np.minimum(np.maximum(x, lower), upper)


def sbx_crossover(p1: np.ndarray, p2: np.ndarray, prob: float, dist_index: float,
                  lower: np.ndarray, upper: np.ndarray,
                  rng: RandomStream) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover on two parent vectors.

    One draw gates the whole pair; when it passes, every variable is crossed
    with its own spread factor. Children are clipped to the bounds.
    """
    if p1.shape != p2.shape:
        raise ValueError("parent length mismatch")
    if not 0.0 <= prob <= 1.0:
        raise ValueError("prob must be in [0, 1]")
    if dist_index <= 0:
        raise ValueError("dist_index must be positive")
    if rng.random() > prob:
        return p1.copy(), p2.copy()
    u = rng.random(size=p1.shape[0])
    beta = np.where(u <= 0.5,
                    (2.0 * u) ** (1.0 / (dist_index + 1.0)),
                    (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (dist_index + 1.0)))
    mean = 0.5 * (p1 + p2)
    diff = 0.5 * (p2 - p1)
    c1 = mean - beta * diff
    c2 = mean + beta * diff
    return clip_to_bounds(c1, lower, upper), clip_to_bounds(c2, lower, upper)


def polynomial_mutation(x: np.ndarray, prob: float, dist_index: float,
                        lower: np.ndarray, upper: np.ndarray,
                        rng: RandomStream) -> np.ndarray:
    """Bounded polynomial mutation, gated per variable."""
    if not 0.0 <= prob <= 1.0:
        raise ValueError("prob must be in [0, 1]")
    y = x.copy()
    span = upper - lower
    gates = rng.random(size=x.shape[0]) < prob
    if not gates.any():
        return y
    u = rng.random(size=x.shape[0])
    mut_pow = 1.0 / (dist_index + 1.0)
    for i in np.flatnonzero(gates):
        if span[i] <= 0:
            continue
        d1 = (x[i] - lower[i]) / span[i]
        d2 = (upper[i] - x[i]) / span[i]
        if u[i] <= 0.5:
            val = 2.0 * u[i] + (1.0 - 2.0 * u[i]) * (1.0 - d1) ** (dist_index + 1.0)
            delta = val ** mut_pow - 1.0
        else:
            val = 2.0 * (1.0 - u[i]) + 2.0 * (u[i] - 0.5) * (1.0 - d2) ** (dist_index + 1.0)
            delta = 1.0 - val ** mut_pow
        y[i] = x[i] + delta * span[i]
    return clip_to_bounds(y, lower, upper)


def de_crossover(target: np.ndarray, r1: np.ndarray, r2: np.ndarray, r3: np.ndarray,
                 cr: float, f: float, lower: np.ndarray, upper: np.ndarray,
                 rng: RandomStream) -> np.ndarray:
    """Differential-evolution crossover.

    trial_i = r1_i + f * (r2_i - r3_i) where the rate gate fires (one index
    is always forced), otherwise target_i. The caller is responsible for
    supplying four distinct population members.
    """
    if not 0.0 <= cr <= 1.0:
        raise ValueError("cr must be in [0, 1]")
    n = target.shape[0]
    forced = int(rng.integers(0, n))
    gates = rng.random(size=n) < cr
    gates[forced] = True
    mutant = r1 + f * (r2 - r3)
    trial = np.where(gates, mutant, target)
    return clip_to_bounds(trial, lower, upper)


def binary_tournament(ranks: np.ndarray, crowding: np.ndarray, rng: RandomStream) -> int:
    """Pick one index: lower rank wins, then larger crowding, then a coin flip."""
    n = len(ranks)
    if n == 0:
        raise ValueError("empty population")
    i = int(rng.integers(0, n))
    j = int(rng.integers(0, n))
    if ranks[i] != ranks[j]:
        return i if ranks[i] < ranks[j] else j
    if crowding[i] != crowding[j]:
        return i if crowding[i] > crowding[j] else j
    return i if rng.random() < 0.5 else j


def nondominated_indices(objs: np.ndarray) -> np.ndarray:
    """Indices of the non-dominated rows of an (N, m) objective matrix."""
    objs = np.asarray(objs, dtype=float)
    n = len(objs)
    keep = np.ones(n, dtype=bool)
    # Sorting by the first objective lets each point only check earlier rows.
    order = np.lexsort(objs.T[::-1])
    for pos in range(n):
        i = order[pos]
        if not keep[i]:
            continue
        prior = order[:pos]
        prior = prior[keep[prior]]
        if len(prior) == 0:
            continue
        cand = objs[prior]
        dominated = np.any(np.all(cand <= objs[i], axis=1) & np.any(cand < objs[i], axis=1))
        if dominated:
            keep[i] = False
    return np.flatnonzero(keep)
