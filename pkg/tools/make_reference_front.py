"""Generate the bundled KSW10 reference front.

The Kursawe front has no closed form, so the bundled sample is produced by
long seeded elitist runs (merged across seeds), non-dominated filtering, and
even downsampling. Rerun this script to regenerate
src/moea_accel/problems/data/ksw10_front.txt.
"""

from __future__ import annotations

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from moea_accel.core import (  # noqa: E402
    binary_tournament,
    crowding_distance,
    fast_nondominated_sort,
    nondominated_indices,
    polynomial_mutation,
    ranks_from_fronts,
    sbx_crossover,
)
from moea_accel.problems.ksw import _ksw  # noqa: E402
from moea_accel.rng import RandomStream  # noqa: E402

POP = 300
GENERATIONS = 1000
SEEDS = (101, 202, 303)
TARGET_POINTS = 5000
LOWER = np.full(10, -5.0)
UPPER = np.full(10, 5.0)


def staircase_filter(points: np.ndarray) -> np.ndarray:
    """Fast bi-objective non-dominated filter (sort + sweep)."""
    pts = np.unique(points, axis=0)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = []
    best_f2 = np.inf
    for row in pts:
        if row[1] < best_f2:
            keep.append(row)
            best_f2 = row[1]
    return np.asarray(keep)


def run_one(seed: int) -> np.ndarray:
    rng = RandomStream(seed)
    pop_x = rng.uniform(LOWER, UPPER, size=(POP, 10))
    pop_f = np.array([_ksw(x) for x in pop_x])
    archive = pop_f.copy()
    for gen in range(GENERATIONS):
        fronts = fast_nondominated_sort(pop_f)
        ranks = ranks_from_fronts(fronts, POP)
        crowd = np.zeros(POP)
        for front in fronts:
            crowd[front] = crowding_distance(pop_f[front])
        children = []
        for _ in range(POP // 2):
            a = binary_tournament(ranks, crowd, rng)
            b = binary_tournament(ranks, crowd, rng)
            c1, c2 = sbx_crossover(pop_x[a], pop_x[b], 0.9, 15.0, LOWER, UPPER, rng)
            children.append(polynomial_mutation(c1, 1.0 / 10.0, 20.0, LOWER, UPPER, rng))
            children.append(polynomial_mutation(c2, 1.0 / 10.0, 20.0, LOWER, UPPER, rng))
        child_x = np.array(children)
        child_f = np.array([_ksw(x) for x in child_x])
        merged_x = np.vstack([pop_x, child_x])
        merged_f = np.vstack([pop_f, child_f])
        fronts = fast_nondominated_sort(merged_f)
        chosen = []
        for front in fronts:
            if len(chosen) + len(front) <= POP:
                chosen.extend(front)
            else:
                crowd_front = crowding_distance(merged_f[front])
                order = np.argsort(-crowd_front, kind="stable")
                need = POP - len(chosen)
                chosen.extend([front[i] for i in order[:need]])
                break
        pop_x = merged_x[chosen]
        pop_f = merged_f[chosen]
        # Accumulate every candidate near the front; thin periodically.
        if gen > GENERATIONS // 4:
            archive = np.vstack([archive, merged_f[fronts[0]]])
            if len(archive) > 60_000 or gen == GENERATIONS - 1:
                archive = staircase_filter(archive)
    return staircase_filter(archive)


def main() -> None:
    pool = staircase_filter(np.vstack([run_one(s) for s in SEEDS]))
    print(f"merged non-dominated pool: {len(pool)} points")
    if len(pool) > TARGET_POINTS:
        idx = (np.arange(TARGET_POINTS) * len(pool)) // TARGET_POINTS
        pool = pool[idx]
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "moea_accel" / "problems" / "data"
    out.mkdir(parents=True, exist_ok=True)
    path = out / "ksw10_front.txt"
    with path.open("w") as fh:
        for row in pool:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {len(pool)} points to {path}")


if __name__ == "__main__":
    main()
