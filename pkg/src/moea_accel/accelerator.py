"""The surrogate inner loop and its adaptive exit state machine.

While active, each host generation trains per-objective surrogates on the
previous true-evaluated population, evolves the host's fresh offspring
against those estimates for half the host's generation count, and splices a
random share of the resulting non-dominated set back into the offspring for
true re-evaluation. The accelerator deactivates permanently once the share
of its solutions surviving in the host archive drops to half its historical
peak, or at the forced-exit generation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import EvalKind, Origin, Population, SolutionRecord
from .hosts import MoeadHost, NsgaiiHost, SurrogateEvaluation
from .rng import RandomStream
from .surrogates import CVSpec, SurrogateEnsemble, train_ensemble

ACTIVATION_GENERATION = 2
FORCED_EXIT_GENERATION = 50
FIRST_CHECK_GENERATION = 4  # earliest generation with a two-generation-old cohort


@dataclass
class AcceleratorState:
    """Exit state machine driven by the archive share of surviving
    surrogate solutions."""

    inner_generations: int
    integration_fraction: float = 0.5
    activation_generation: int = ACTIVATION_GENERATION
    forced_exit_generation: int = FORCED_EXIT_GENERATION
    active: bool = True
    peak_share: float = 0.0
    share: float | None = None
    deactivation_generation: int | None = None

    def update(self, share: float, generation: int) -> None:
        """Fold in one share measurement; may deactivate permanently."""
        if not self.active:
            return
        if not 0.0 <= share <= 1.0:
            raise ValueError("share must lie in [0, 1]")
        self.share = share
        if share > self.peak_share:
            self.peak_share = share
        if (self.peak_share != 0.0 and share <= self.peak_share / 2.0) \
                or generation == self.forced_exit_generation:
            self.active = False
            self.deactivation_generation = generation


def surrogate_share(archive: list[SolutionRecord], generation: int) -> float:
    """Fraction of the archive born two generations ago in the inner loop."""
    if not archive:
        raise ValueError("archive is empty")
    count = sum(1 for r in archive
                if r.origin is Origin.SURROGATE_ACCELERATOR
                and r.birth_generation == generation - 2)
    return count / len(archive)


def evaluate_surrogate_status(archive: list[SolutionRecord], generation: int,
                              state: AcceleratorState) -> AcceleratorState:
    """Measure the surviving share on the archive and update the state."""
    state.update(surrogate_share(archive, generation), generation)
    return state


def estimate_records(ensemble: SurrogateEnsemble, records: list[SolutionRecord],
                     birth: int) -> list[SolutionRecord]:
    """Re-tag records as inner-loop solutions carrying estimated objectives."""
    variables = np.asarray([r.variables for r in records])
    estimates = ensemble.estimate_batch(variables)
    return [
        SolutionRecord(r.variables, Origin.SURROGATE_ACCELERATOR, birth,
                       est, EvalKind.SURROGATE_ESTIMATE)
        for r, est in zip(records, estimates)
    ]


def run_inner_loop(ensemble: SurrogateEnsemble, main_offspring: list[SolutionRecord],
                   host, birth: int, inner_generations: int,
                   rng: RandomStream) -> list[SolutionRecord]:
    """Evolve the offspring against the ensemble for the inner generation
    budget and return the final non-dominated set (all estimate-tagged);
    consumes zero true evaluations."""
    initial = estimate_records(ensemble, main_offspring, birth)
    evaluation = SurrogateEvaluation(ensemble)
    if isinstance(host, NsgaiiHost):
        inner = NsgaiiHost(host.problem, host.config, rng, evaluation=evaluation,
                           initial=initial, origin=Origin.SURROGATE_ACCELERATOR,
                           fixed_birth=birth)
        for _ in range(1, inner_generations):
            inner.step_plain(rng)
        return inner.front_records()
    if isinstance(host, MoeadHost):
        inner = MoeadHost(host.problem, host.config, rng, evaluation=evaluation,
                          initial=initial, origin=Origin.SURROGATE_ACCELERATOR,
                          fixed_birth=birth, weights=host.weights)
        for _ in range(1, inner_generations):
            inner.step_plain(rng)
        return inner.front_records()
    raise TypeError(f"unsupported host type {type(host).__name__}")


def consolidate_offspring(main_offspring: list[SolutionRecord],
                          front: list[SolutionRecord], fraction: float,
                          rng: RandomStream) -> tuple[list[SolutionRecord], int]:
    """Splice surrogate solutions into the offspring population.

    Picks k = min(floor(fraction * S), len(front)) front members uniformly
    without replacement, fills the remaining slots from the host offspring
    (uniformly, without replacement), drops all estimated objectives so the
    host re-evaluates everything, and shuffles the slot order. Returns the
    new population and k.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    size = len(main_offspring)
    if not front:
        return list(main_offspring), 0
    k = min(int(fraction * size), len(front))
    pick_idx = rng.choice(len(front), size=k, replace=False)
    keep_idx = rng.choice(size, size=size - k, replace=False)
    merged = [front[int(i)].reset_unevaluated() for i in pick_idx]
    merged += [main_offspring[int(i)] for i in keep_idx]
    order = rng.permutation(size)
    return [merged[int(i)] for i in order], k


@dataclass
class GenerationReport:
    """What the accelerator did during one host generation."""

    share: float | None = None
    peak_share: float | None = None
    active: bool = False
    transferred: int = 0
    training_seconds: list[float] = field(default_factory=list)


def accelerated_generation(host, state: AcceleratorState, model_kind: str,
                           cv_spec: CVSpec, rng: RandomStream) -> GenerationReport:
    """Advance the host by one generation under accelerator control.

    Call for every generation at or past the activation threshold. Performs
    the survival-share check (from the fourth generation on), then either a
    surrogate-assisted step or a plain host step.
    """
    report = GenerationReport()
    t = host.generation + 1  # index of the generation being produced
    if state.active and t >= FIRST_CHECK_GENERATION:
        evaluate_surrogate_status(host.population, t, state)
        report.share = state.share
    if not state.active:
        host.step_plain(rng)
        report.peak_share = state.peak_share
        return report
    report.active = True
    training_pop = Population(list(host.population), capacity=len(host.population))
    ensemble = train_ensemble(training_pop, model_kind, cv_spec, rng.split())
    report.training_seconds = list(ensemble.training_times)
    if isinstance(host, MoeadHost):
        offspring, slots = host.make_offspring(rng)
    else:
        offspring, slots = host.make_offspring(rng), None
    front = run_inner_loop(ensemble, offspring, host, t, state.inner_generations, rng)
    consolidated, transferred = consolidate_offspring(
        offspring, front, state.integration_fraction, rng)
    report.transferred = transferred
    if slots is not None:
        host.step_with_offspring(consolidated, slots, rng)
    else:
        host.step_with_offspring(consolidated, rng)
    report.peak_share = state.peak_share
    return report
