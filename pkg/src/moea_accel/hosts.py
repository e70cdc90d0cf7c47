"""Host solvers: generational NSGA-II and steady-state MOEA/D-DRA.

Both expose the same stepping surface: `step_plain` advances one generation
with the host's own offspring, while `make_offspring` / `step_with_offspring`
split generation from evaluation so an inner loop can intervene between the
two. MOEA/D counts a generation through an external offspring store that
flushes at the population size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    EvalKind,
    Origin,
    SolutionRecord,
    binary_tournament,
    crowding_distance,
    de_crossover,
    fast_nondominated_sort,
    nondominated_indices,
    polynomial_mutation,
    ranks_from_fronts,
    sbx_crossover,
)
from .rng import RandomStream

HOST_KINDS = ("nsgaii", "moead")


@dataclass(frozen=True)
class HostConfig:
    host: str
    population_size: int
    offspring_size: int
    budget: int = 50_000
    # NSGA-II operators
    sbx_prob: float = 0.8
    sbx_eta: float = 20.0
    pm_prob: float | None = None  # None resolves to 1/n
    pm_eta: float = 20.0
    # MOEA/D operators and neighbourhood behaviour
    de_cr: float = 0.2
    de_f: float = 0.5
    neighbourhood_size: int = 20
    neighbour_prob: float = 0.9
    max_replacements: int = 2
    # MOEA/D-DRA internals (generation-equivalents between utility updates,
    # tournament size for subproblem selection)
    dra_update_period: int = 50
    dra_tournament_size: int = 10

    def __post_init__(self):
        if self.host not in HOST_KINDS:
            raise ValueError(f"unknown host '{self.host}'")
        for p in (self.sbx_prob, self.neighbour_prob, self.de_cr):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")

    @property
    def generations(self) -> int:
        return self.budget // self.population_size


def nsgaii_config(budget: int = 50_000, population_size: int = 200, **kwargs) -> HostConfig:
    return HostConfig("nsgaii", population_size, population_size, budget, **kwargs)


def moead_config(budget: int = 50_000, population_size: int = 300, **kwargs) -> HostConfig:
    return HostConfig("moead", population_size, population_size, budget, **kwargs)


# --- evaluation backends -------------------------------------------------------

class TrueEvaluation:
    """Counts and applies true fitness evaluations."""

    kind = EvalKind.TRUE_FITNESS

    def __init__(self, problem):
        self.problem = problem
        self.count = 0

    def evaluate_batch(self, variables: np.ndarray) -> np.ndarray:
        self.count += len(variables)
        return np.asarray([self.problem.evaluate(x) for x in variables])


class SurrogateEvaluation:
    """Applies ensemble estimates; consumes no true evaluations."""

    kind = EvalKind.SURROGATE_ESTIMATE

    def __init__(self, ensemble):
        self.ensemble = ensemble
        self.count = 0

    def evaluate_batch(self, variables: np.ndarray) -> np.ndarray:
        self.count += len(variables)
        return self.ensemble.estimate_batch(np.asarray(variables))


def _evaluate_records(records, evaluation) -> list[SolutionRecord]:
    if not records:
        return []
    objs = evaluation.evaluate_batch(np.asarray([r.variables for r in records]))
    return [r.evaluated(f, evaluation.kind) for r, f in zip(records, objs)]


# --- NSGA-II ---------------------------------------------------------------------

class NsgaiiHost:
    def __init__(self, problem, config: HostConfig, rng: RandomStream,
                 evaluation=None, initial: list[SolutionRecord] | None = None,
                 origin: Origin = Origin.HOST_OPERATOR,
                 fixed_birth: int | None = None):
        self.problem = problem
        self.config = config
        self.evaluation = evaluation if evaluation is not None else TrueEvaluation(problem)
        self.origin = origin
        self.fixed_birth = fixed_birth
        self.pm_prob = config.pm_prob if config.pm_prob is not None else 1.0 / problem.n
        self.generation = 0
        if initial is not None:
            if len(initial) != config.population_size:
                raise ValueError("initial population size mismatch")
            self.population = list(initial)
        else:
            xs = rng.uniform(problem.lower, problem.upper,
                             size=(config.population_size, problem.n))
            records = [SolutionRecord(x, origin, 0) for x in xs]
            self.population = _evaluate_records(records, self.evaluation)
        self._refresh_selection_cache()

    @property
    def evaluations_used(self) -> int:
        return self.evaluation.count

    def _refresh_selection_cache(self) -> None:
        objs = np.asarray([r.objectives for r in self.population])
        self._fronts = fast_nondominated_sort(objs)
        self._ranks = ranks_from_fronts(self._fronts, len(objs))
        self._crowding = np.zeros(len(objs))
        for front in self._fronts:
            self._crowding[front] = crowding_distance(objs[front])

    def front_records(self) -> list[SolutionRecord]:
        return [self.population[i] for i in self._fronts[0]]

    def front_objectives(self) -> np.ndarray:
        return np.asarray([r.objectives for r in self.front_records()])

    def _birth(self) -> int:
        return self.fixed_birth if self.fixed_birth is not None else self.generation + 1

    def make_offspring(self, rng: RandomStream) -> list[SolutionRecord]:
        """Tournament + SBX + PM offspring batch, unevaluated."""
        cfg = self.config
        birth = self._birth()
        lower, upper = self.problem.lower, self.problem.upper
        children: list[SolutionRecord] = []
        while len(children) < cfg.offspring_size:
            a = binary_tournament(self._ranks, self._crowding, rng)
            b = binary_tournament(self._ranks, self._crowding, rng)
            c1, c2 = sbx_crossover(self.population[a].variables,
                                   self.population[b].variables,
                                   cfg.sbx_prob, cfg.sbx_eta, lower, upper, rng)
            for child in (c1, c2):
                if len(children) >= cfg.offspring_size:
                    break
                mutated = polynomial_mutation(child, self.pm_prob, cfg.pm_eta,
                                              lower, upper, rng)
                children.append(SolutionRecord(mutated, self.origin, birth))
        return children

    def _environmental_selection(self, merged: list[SolutionRecord]) -> None:
        objs = np.asarray([r.objectives for r in merged])
        fronts = fast_nondominated_sort(objs)
        target = self.config.population_size
        chosen: list[int] = []
        for front in fronts:
            if len(chosen) + len(front) <= target:
                chosen.extend(front)
            else:
                crowd = crowding_distance(objs[front])
                order = np.argsort(-crowd, kind="stable")
                chosen.extend(front[i] for i in order[: target - len(chosen)])
                break
        self.population = [merged[i] for i in chosen]
        self._refresh_selection_cache()

    def step_with_offspring(self, offspring: list[SolutionRecord], rng: RandomStream) -> None:
        evaluated = _evaluate_records(offspring, self.evaluation)
        self._environmental_selection(self.population + evaluated)
        self.generation += 1

    def step_plain(self, rng: RandomStream) -> None:
        self.step_with_offspring(self.make_offspring(rng), rng)


# --- MOEA/D-DRA -------------------------------------------------------------------

@dataclass
class WeightVectorSet:
    vectors: np.ndarray        # (N, m) simplex weights
    neighbourhoods: np.ndarray  # (N, T) nearest-vector indices, sorted by distance


def make_weight_vectors(m: int, target_size: int, neighbourhood_size: int) -> WeightVectorSet:
    """Simplex-lattice weight vectors; the count snaps to the nearest
    achievable lattice size when m > 2."""
    if m == 2:
        frac = np.linspace(0.0, 1.0, target_size)
        vectors = np.column_stack([frac, 1.0 - frac])
    else:
        h = 1
        best_h, best_gap = 1, float("inf")
        while True:
            size = math.comb(h + m - 1, m - 1)
            gap = abs(size - target_size)
            if gap < best_gap:
                best_h, best_gap = h, gap
            if size >= target_size and gap >= best_gap:
                break
            h += 1
        from .problems.base import _lattice_points

        vectors = _lattice_points(best_h, m)
    dists = np.linalg.norm(vectors[:, None, :] - vectors[None, :, :], axis=2)
    neighbourhoods = np.argsort(dists, axis=1, kind="stable")[:, :neighbourhood_size]
    return WeightVectorSet(vectors, neighbourhoods)


def tchebycheff(f: np.ndarray, lam: np.ndarray, z_star: np.ndarray) -> float:
    """Weighted max-distance scalarisation with zero weights lifted to 1e-6."""
    lam_safe = np.where(lam == 0.0, 1e-6, lam)
    return float(np.max(lam_safe * np.abs(np.asarray(f) - z_star)))


class GenerationStore:
    """External offspring store that flags a generation each time the pending
    count reaches the flush threshold."""

    def __init__(self, flush_threshold: int):
        self.flush_threshold = flush_threshold
        self.pending: list[SolutionRecord] = []

    def push(self, record: SolutionRecord) -> bool:
        self.pending.append(record)
        if len(self.pending) >= self.flush_threshold:
            self.pending = []
            return True
        return False


class MoeadHost:
    def __init__(self, problem, config: HostConfig, rng: RandomStream,
                 evaluation=None, initial: list[SolutionRecord] | None = None,
                 origin: Origin = Origin.HOST_OPERATOR,
                 fixed_birth: int | None = None,
                 weights: WeightVectorSet | None = None):
        self.problem = problem
        self.evaluation = evaluation if evaluation is not None else TrueEvaluation(problem)
        self.origin = origin
        self.fixed_birth = fixed_birth
        self.pm_prob = config.pm_prob if config.pm_prob is not None else 1.0 / problem.n
        if weights is None:
            weights = make_weight_vectors(problem.m, config.population_size,
                                          config.neighbourhood_size)
        self.weights = weights
        actual = len(weights.vectors)
        if actual != config.population_size:
            config = replace(config, population_size=actual, offspring_size=actual)
        self.config = config
        n_pop = config.population_size
        if initial is not None:
            if len(initial) != n_pop:
                raise ValueError("initial population size mismatch")
            self.population = list(initial)
        else:
            xs = rng.uniform(problem.lower, problem.upper, size=(n_pop, problem.n))
            records = [SolutionRecord(x, origin, 0) for x in xs]
            self.population = _evaluate_records(records, self.evaluation)
        objs = np.asarray([r.objectives for r in self.population])
        self.z_star = objs.min(axis=0)
        self.utilities = np.ones(n_pop)
        self._saved_obj = np.array([
            tchebycheff(self.population[i].objectives, self.weights.vectors[i], self.z_star)
            for i in range(n_pop)
        ])
        self._boundary = [int(np.flatnonzero(self.weights.vectors[:, d] >= 1.0 - 1e-12)[0])
                          for d in range(problem.m)]
        self.store = GenerationStore(n_pop)
        self.generation = 0
        self.offspring_count = 0
        self._last_utility_update = 0
        self._pending_subproblems: list[tuple[int, bool]] = []

    @property
    def evaluations_used(self) -> int:
        return self.evaluation.count

    def front_records(self) -> list[SolutionRecord]:
        objs = np.asarray([r.objectives for r in self.population])
        return [self.population[i] for i in nondominated_indices(objs)]

    def front_objectives(self) -> np.ndarray:
        return np.asarray([r.objectives for r in self.front_records()])

    def _birth(self) -> int:
        return self.fixed_birth if self.fixed_birth is not None else self.generation + 1

    # --- DRA subproblem selection ------------------------------------------------

    def _select_subproblems(self, rng: RandomStream) -> list[int]:
        n_pop = self.config.population_size
        count = max(len(self._boundary), n_pop // 5)
        selected = list(self._boundary)
        while len(selected) < count:
            cand = rng.integers(0, n_pop, size=self.config.dra_tournament_size)
            selected.append(int(cand[int(np.argmax(self.utilities[cand]))]))
        return selected

    def _next_slot(self, rng: RandomStream) -> tuple[int, bool]:
        if not self._pending_subproblems:
            for i in self._select_subproblems(rng):
                use_nb = rng.random() < self.config.neighbour_prob
                self._pending_subproblems.append((i, use_nb))
        return self._pending_subproblems.pop(0)

    # --- offspring generation and integration -------------------------------------

    def _generate_for(self, i: int, use_nb: bool, rng: RandomStream) -> SolutionRecord:
        cfg = self.config
        pool = self.weights.neighbourhoods[i] if use_nb \
            else np.arange(cfg.population_size)
        donors = pool[pool != i]
        if len(donors) < 3:
            raise ValueError("fewer than 4 distinct population members for DE crossover")
        pick = rng.choice(len(donors), size=3, replace=False)
        r1, r2, r3 = (self.population[int(donors[p])].variables for p in pick)
        trial = de_crossover(self.population[i].variables, r1, r2, r3,
                             cfg.de_cr, cfg.de_f,
                             self.problem.lower, self.problem.upper, rng)
        mutated = polynomial_mutation(trial, self.pm_prob, cfg.pm_eta,
                                      self.problem.lower, self.problem.upper, rng)
        return SolutionRecord(mutated, self.origin, self._birth())

    def _integrate_one(self, record: SolutionRecord, slot: tuple[int, bool],
                       rng: RandomStream) -> bool:
        """Ideal-point update, bounded replacement, store push; returns True
        when the store flushed (one generation captured)."""
        i, use_nb = slot
        cfg = self.config
        fy = record.objectives
        self.z_star = np.minimum(self.z_star, fy)
        pool = self.weights.neighbourhoods[i] if use_nb \
            else np.arange(cfg.population_size)
        order = rng.permutation(len(pool))
        replaced = 0
        for idx in order:
            j = int(pool[idx])
            if tchebycheff(fy, self.weights.vectors[j], self.z_star) < \
                    tchebycheff(self.population[j].objectives, self.weights.vectors[j],
                                self.z_star):
                self.population[j] = record
                replaced += 1
                if replaced >= cfg.max_replacements:
                    break
        self.offspring_count += 1
        period = cfg.dra_update_period * cfg.population_size
        if self.offspring_count - self._last_utility_update >= period:
            self._update_utilities()
            self._last_utility_update = self.offspring_count
        flushed = self.store.push(record)
        if flushed:
            self.generation += 1
        return flushed

    def _update_utilities(self) -> None:
        for i in range(self.config.population_size):
            new = tchebycheff(self.population[i].objectives,
                              self.weights.vectors[i], self.z_star)
            old = self._saved_obj[i]
            delta = (old - new) / old if old > 1e-30 else 0.0
            if delta > 0.001:
                self.utilities[i] = 1.0
            else:
                self.utilities[i] = (0.95 + 0.05 * delta / 0.001) * self.utilities[i]
            self._saved_obj[i] = new

    def step_plain(self, rng: RandomStream) -> None:
        """Steady-state stepping until the store captures one generation."""
        while True:
            slot = self._next_slot(rng)
            record = self._generate_for(slot[0], slot[1], rng)
            evaluated = _evaluate_records([record], self.evaluation)[0]
            if self._integrate_one(evaluated, slot, rng):
                return

    def make_offspring(self, rng: RandomStream) -> tuple[list[SolutionRecord],
                                                         list[tuple[int, bool]]]:
        """One generation's worth of unevaluated offspring with their
        subproblem slots; replacements are deferred to integration."""
        records, slots = [], []
        for _ in range(self.config.population_size):
            slot = self._next_slot(rng)
            records.append(self._generate_for(slot[0], slot[1], rng))
            slots.append(slot)
        return records, slots

    def step_with_offspring(self, offspring: list[SolutionRecord],
                            slots: list[tuple[int, bool]], rng: RandomStream) -> None:
        evaluated = _evaluate_records(offspring, self.evaluation)
        flushed = False
        for record, slot in zip(evaluated, slots):
            flushed = self._integrate_one(record, slot, rng) or flushed
        if not flushed:
            raise RuntimeError("offspring batch did not complete a generation")


def build_host(problem, config: HostConfig, rng: RandomStream):
    if config.host == "nsgaii":
        return NsgaiiHost(problem, config, rng)
    return MoeadHost(problem, config, rng)
