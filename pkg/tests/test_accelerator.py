"""Tests for the inner loop, offspring consolidation, and the exit rule."""

import numpy as np
import pytest

from moea_accel.accelerator import (
    AcceleratorState,
    GenerationReport,
    accelerated_generation,
    consolidate_offspring,
    estimate_records,
    evaluate_surrogate_status,
    run_inner_loop,
    surrogate_share,
)
from moea_accel.core import EvalKind, Origin, Population, SolutionRecord
from moea_accel.hosts import MoeadHost, NsgaiiHost, moead_config, nsgaii_config
from moea_accel.problems import make_problem
from moea_accel.rng import RandomStream
from moea_accel.surrogates import CVSpec, train_ensemble

FAST_GPR_CV = CVSpec("gpr", {"length_scale": [0.5], "noise": [1e-6]},
                     n_candidates=1, n_folds=2)


def make_archive(total, surrogate_born_at, count, generation):
    """Archive with `count` surrogate members born at `surrogate_born_at`."""
    recs = []
    for i in range(total):
        if i < count:
            recs.append(SolutionRecord(np.zeros(2), Origin.SURROGATE_ACCELERATOR,
                                       surrogate_born_at, np.zeros(2),
                                       EvalKind.TRUE_FITNESS))
        else:
            recs.append(SolutionRecord(np.zeros(2), Origin.HOST_OPERATOR,
                                       max(0, generation - 1), np.zeros(2),
                                       EvalKind.TRUE_FITNESS))
    return recs


class TestExitStateMachine:
    def test_first_measurement_sets_peak(self):
        state = AcceleratorState(inner_generations=10)
        archive = make_archive(200, surrogate_born_at=2, count=64, generation=4)
        evaluate_surrogate_status(archive, 4, state)
        assert state.share == pytest.approx(0.32)
        assert state.peak_share == pytest.approx(0.32)
        assert state.active

    def test_half_life_deactivation(self):
        state = AcceleratorState(inner_generations=10)
        state.update(0.32, 4)
        state.update(0.15, 5)  # 0.15 <= 0.16
        assert not state.active
        assert state.deactivation_generation == 5

    def test_above_half_stays_active(self):
        state = AcceleratorState(inner_generations=10)
        state.update(0.32, 4)
        state.update(0.20, 5)  # 0.20 > 0.16
        assert state.active

    def test_zero_peak_forces_exit_at_50(self):
        state = AcceleratorState(inner_generations=10)
        for t in range(4, 50):
            state.update(0.0, t)
            assert state.active
        state.update(0.0, 50)
        assert not state.active
        assert state.deactivation_generation == 50

    def test_share_counts_only_two_generation_old_cohort(self):
        archive = make_archive(100, surrogate_born_at=3, count=25, generation=5)
        assert surrogate_share(archive, 5) == pytest.approx(0.25)
        assert surrogate_share(archive, 6) == 0.0

    def test_scripted_trace_properties(self):
        # Exhaustive randomized simulation of the exit rule.
        rng = np.random.default_rng(99)
        for _ in range(10_000):
            state = AcceleratorState(inner_generations=5)
            length = int(rng.integers(1, 60))
            shares = rng.choice([0.0, 0.01, 0.05, 0.1, 0.2, 0.4, 0.8],
                                size=length)
            peak = 0.0
            deactivations = 0
            for step, share in enumerate(shares):
                t = 4 + step
                was_active = state.active
                state.update(float(share), t)
                if not was_active:
                    # Permanent: no reactivation, no state drift.
                    assert not state.active
                    continue
                new_peak = max(peak, share)
                should_exit = (new_peak != 0.0 and share <= new_peak / 2.0) or t == 50
                assert state.active == (not should_exit)
                if should_exit:
                    deactivations += 1
                    assert state.deactivation_generation == t
                assert state.peak_share == pytest.approx(new_peak)
                assert state.peak_share >= peak  # monotone
                peak = new_peak
            assert deactivations <= 1

    def test_out_of_range_share_rejected(self):
        state = AcceleratorState(inner_generations=5)
        with pytest.raises(ValueError):
            state.update(1.5, 4)


class TestConsolidation:
    def _offspring(self, size):
        return [SolutionRecord(np.full(3, i, dtype=float), Origin.HOST_OPERATOR, 7)
                for i in range(size)]

    def _front(self, size):
        return [SolutionRecord(np.full(3, 100.0 + i), Origin.SURROGATE_ACCELERATOR, 7,
                               np.array([1.0, 2.0]), EvalKind.SURROGATE_ESTIMATE)
                for i in range(size)]

    def test_half_split(self):
        merged, k = consolidate_offspring(self._offspring(200), self._front(150),
                                          0.5, RandomStream(1))
        assert k == 100
        assert len(merged) == 200
        surrogate = [r for r in merged if r.origin is Origin.SURROGATE_ACCELERATOR]
        host = [r for r in merged if r.origin is Origin.HOST_OPERATOR]
        assert len(surrogate) == 100 and len(host) == 100

    def test_small_front_takes_all(self):
        merged, k = consolidate_offspring(self._offspring(200), self._front(60),
                                          0.5, RandomStream(2))
        assert k == 60
        assert sum(r.origin is Origin.SURROGATE_ACCELERATOR for r in merged) == 60

    def test_full_fraction(self):
        merged, k = consolidate_offspring(self._offspring(200), self._front(200),
                                          1.0, RandomStream(3))
        assert k == 200
        assert all(r.origin is Origin.SURROGATE_ACCELERATOR for r in merged)

    def test_empty_front_passthrough(self):
        offspring = self._offspring(10)
        merged, k = consolidate_offspring(offspring, [], 0.5, RandomStream(4))
        assert k == 0
        assert merged == offspring

    def test_everything_reset_unevaluated_and_unique(self):
        merged, _ = consolidate_offspring(self._offspring(50), self._front(40),
                                          0.5, RandomStream(5))
        assert all(r.eval_kind is EvalKind.UNEVALUATED for r in merged)
        assert all(r.objectives is None for r in merged)
        assert len({id(r) for r in merged}) == 50
        # Origin and birth tags survive the reset.
        for rec in merged:
            assert rec.birth_generation == 7

    def test_bad_fraction_rejected(self):
        with pytest.raises(ValueError):
            consolidate_offspring(self._offspring(4), self._front(4), 0.0, RandomStream(6))


def trained_ensemble(problem, pop_size=30, seed=0):
    rng = RandomStream(seed)
    xs = rng.uniform(problem.lower, problem.upper, size=(pop_size, problem.n))
    recs = [SolutionRecord(x, Origin.HOST_OPERATOR, 0,
                           problem.evaluate(x), EvalKind.TRUE_FITNESS) for x in xs]
    pop = Population(recs, capacity=pop_size)
    return train_ensemble(pop, "gpr", FAST_GPR_CV, rng.split())


class TestInnerLoop:
    def test_nsgaii_inner_contract(self):
        problem = make_problem("ZDT3")
        cfg = nsgaii_config(budget=400, population_size=20)
        rng = RandomStream(11)
        host = NsgaiiHost(problem, cfg, rng)
        ensemble = trained_ensemble(problem)
        offspring = host.make_offspring(rng)
        evals_before = host.evaluations_used
        front = run_inner_loop(ensemble, offspring, host, birth=3,
                               inner_generations=5, rng=rng)
        assert host.evaluations_used == evals_before  # zero true evaluations
        assert 1 <= len(front) <= cfg.offspring_size
        for rec in front:
            assert rec.eval_kind is EvalKind.SURROGATE_ESTIMATE
            assert rec.origin is Origin.SURROGATE_ACCELERATOR
            assert rec.birth_generation == 3

    def test_moead_inner_contract(self):
        problem = make_problem("ZDT1")
        cfg = moead_config(budget=400, population_size=20, neighbourhood_size=6)
        rng = RandomStream(12)
        host = MoeadHost(problem, cfg, rng)
        ensemble = trained_ensemble(problem)
        offspring, _slots = host.make_offspring(rng)
        evals_before = host.evaluations_used
        front = run_inner_loop(ensemble, offspring, host, birth=2,
                               inner_generations=4, rng=rng)
        assert host.evaluations_used == evals_before
        assert all(r.origin is Origin.SURROGATE_ACCELERATOR for r in front)

    def test_estimate_records_tags(self):
        problem = make_problem("ZDT1")
        ensemble = trained_ensemble(problem)
        recs = [SolutionRecord(np.full(problem.n, 0.5), Origin.HOST_OPERATOR, 9)]
        est = estimate_records(ensemble, recs, birth=9)
        assert est[0].eval_kind is EvalKind.SURROGATE_ESTIMATE
        assert est[0].origin is Origin.SURROGATE_ACCELERATOR
        assert est[0].objectives.shape == (2,)


class TestAcceleratedStepping:
    def _drive(self, host_kind, seed, generations=8):
        problem = make_problem("ZDT3")
        if host_kind == "nsgaii":
            cfg = nsgaii_config(budget=20 * generations, population_size=20)
        else:
            cfg = moead_config(budget=20 * generations, population_size=20,
                               neighbourhood_size=6)
        rng = RandomStream(seed)
        host = (NsgaiiHost if host_kind == "nsgaii" else MoeadHost)(problem, cfg, rng)
        state = AcceleratorState(inner_generations=cfg.generations // 2)
        evals = [host.evaluations_used]
        reports = [None]
        for t in range(1, generations):
            if t >= state.activation_generation:
                reports.append(accelerated_generation(host, state, "gpr",
                                                      FAST_GPR_CV, rng))
            else:
                host.step_plain(rng)
                reports.append(None)
            evals.append(host.evaluations_used)
        return host, state, evals, reports

    @pytest.mark.parametrize("host_kind", ["nsgaii", "moead"])
    def test_true_evaluation_parity_with_baseline(self, host_kind):
        host, state, evals, _ = self._drive(host_kind, seed=21)
        # Baseline run: identical per-generation accounting.
        problem = make_problem("ZDT3")
        if host_kind == "nsgaii":
            cfg = nsgaii_config(budget=160, population_size=20)
            base = NsgaiiHost(problem, cfg, RandomStream(22))
        else:
            cfg = moead_config(budget=160, population_size=20, neighbourhood_size=6)
            base = MoeadHost(problem, cfg, RandomStream(22))
        base_evals = [base.evaluations_used]
        rng = RandomStream(23)
        for _ in range(1, 8):
            base.step_plain(rng)
            base_evals.append(base.evaluations_used)
        assert evals == base_evals

    def test_no_surrogate_activity_before_activation(self):
        _, _, _, reports = self._drive("nsgaii", seed=31)
        assert reports[1] is None  # generation 1 ran plain

    def test_share_checks_start_at_generation_four(self):
        _, _, _, reports = self._drive("nsgaii", seed=41)
        assert reports[2].share is None
        assert reports[3].share is None
        if reports[4] is not None and reports[4].active:
            assert reports[4].share is not None

    def test_population_mixes_origins_while_active(self):
        host, state, _, reports = self._drive("nsgaii", seed=51)
        transferred = [r.transferred for r in reports if r is not None and r.active]
        assert any(t > 0 for t in transferred)

    def test_inactive_step_is_plain(self):
        problem = make_problem("ZDT1")
        cfg = nsgaii_config(budget=200, population_size=20)
        rng = RandomStream(61)
        host = NsgaiiHost(problem, cfg, rng)
        state = AcceleratorState(inner_generations=5)
        state.active = False
        state.deactivation_generation = 4
        before = host.evaluations_used
        report = accelerated_generation(host, state, "gpr", FAST_GPR_CV, rng)
        assert not report.active
        assert report.transferred == 0
        assert host.evaluations_used == before + 20
