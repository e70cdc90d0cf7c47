"""Tests for the surrogate models, scalers, CV search, and ensembles."""

import numpy as np
import pytest

from moea_accel.core import EvalKind, Origin, Population, SolutionRecord
from moea_accel.rng import RandomStream
from moea_accel.surrogates import (
    CVSpec,
    ConvNet1D,
    GaussianProcessModel,
    MinimaxScaler,
    RandomForestModel,
    build_training_set,
    default_cv_spec,
    fit_model,
    randomized_search_cv,
    train_ensemble,
)


class TestMinimaxScaler:
    def test_basic_column(self):
        sc = MinimaxScaler()
        out = sc.fit_transform(np.array([[2.0], [4.0], [6.0]]))
        np.testing.assert_allclose(out.ravel(), [0.0, 0.5, 1.0])

    def test_constant_column_maps_to_zero(self):
        sc = MinimaxScaler()
        out = sc.fit_transform(np.array([[3.0, 1.0], [3.0, 2.0]]))
        np.testing.assert_allclose(out[:, 0], [0.0, 0.0])

    def test_roundtrip(self):
        rng = np.random.default_rng(0)
        data = rng.normal(size=(20, 4)) * 7 + 3
        sc = MinimaxScaler()
        scaled = sc.fit_transform(data)
        assert scaled.min() >= 0.0 and scaled.max() <= 1.0
        np.testing.assert_allclose(sc.inverse_transform(scaled), data, atol=1e-12)


def make_population(variables, objectives, kind=EvalKind.TRUE_FITNESS):
    members = [
        SolutionRecord(np.asarray(v, dtype=float), Origin.HOST_OPERATOR, 0,
                       np.asarray(f, dtype=float), kind)
        for v, f in zip(variables, objectives)
    ]
    return Population(members, capacity=len(members))


class TestTrainingSet:
    def test_shapes_and_scaling(self):
        rng = np.random.default_rng(1)
        pop = make_population(rng.random((200, 8)), rng.random((200, 3)))
        data = build_training_set(pop)
        assert data.inputs.shape == (200, 8)
        assert len(data.targets) == 3
        assert all(t.shape == (200,) for t in data.targets)
        assert data.inputs.min() >= 0.0 and data.inputs.max() <= 1.0

    def test_estimated_member_rejected(self):
        pop = make_population([[0.0, 1.0]], [[1.0, 2.0]], kind=EvalKind.SURROGATE_ESTIMATE)
        with pytest.raises(ValueError, match="true evaluations"):
            build_training_set(pop)


class TestGPR:
    def test_near_noiseless_interpolation(self):
        model = GaussianProcessModel(length_scale=1.0, noise=1e-10)
        x = np.array([[0.0], [1.0]])
        y = np.array([0.0, 1.0])
        model.fit(x, y)
        mean, var = model.predict(np.array([[0.0]]))
        assert mean[0] == pytest.approx(0.0, abs=1e-6)
        assert var[0] == pytest.approx(0.0, abs=1e-6)

    def test_far_from_data_reverts_to_prior(self):
        model = GaussianProcessModel(length_scale=0.5, noise=1e-8, signal_variance=2.0)
        x = np.array([[0.0], [0.2], [0.4]])
        model.fit(x, np.array([1.0, 2.0, 1.5]))
        mean, var = model.predict(np.array([[50.0]]))
        assert mean[0] == pytest.approx(0.0, abs=1e-9)
        assert var[0] == pytest.approx(2.0, abs=1e-9)

    def test_matches_dense_solve_oracle(self):
        rng = np.random.default_rng(2)
        for trial in range(5):
            n = int(rng.integers(3, 11))
            x = rng.random((n, 3))
            y = rng.normal(size=n)
            ls, noise = 0.7, 1e-6
            model = GaussianProcessModel(length_scale=ls, noise=noise).fit(x, y)
            q = rng.random((4, 3))
            mean, _ = model.predict(q)
            # Brute-force posterior mean with a dense matrix inverse.
            sq = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
            k = np.exp(-0.5 * sq / ls ** 2) + noise * np.eye(n)
            sq_q = ((q[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
            k_star = np.exp(-0.5 * sq_q / ls ** 2)
            want = k_star @ np.linalg.inv(k) @ y
            np.testing.assert_allclose(mean, want, atol=1e-8)

    def test_interpolates_training_targets(self):
        rng = np.random.default_rng(3)
        x = rng.random((12, 4))
        y = rng.normal(size=12)
        model = GaussianProcessModel(length_scale=1.0, noise=1e-10).fit(x, y)
        mean, var = model.predict(x)
        np.testing.assert_allclose(mean, y, atol=1e-5)
        assert np.all(var >= 0.0)

    def test_variance_nonnegative_everywhere(self):
        rng = np.random.default_rng(4)
        x = rng.random((30, 2))
        model = GaussianProcessModel(length_scale=0.3, noise=1e-9).fit(x, rng.normal(size=30))
        _, var = model.predict(rng.random((200, 2)) * 3 - 1)
        assert np.all(var >= 0.0)

    def test_duplicate_rows_handled_by_jitter(self):
        x = np.zeros((6, 2))  # singular kernel matrix at tiny noise
        y = np.zeros(6)
        model = GaussianProcessModel(length_scale=1.0, noise=1e-10)
        model.fit(x, y)  # jitter escalation must rescue this
        mean, _ = model.predict(np.array([[0.0, 0.0]]))
        assert np.isfinite(mean[0])


class TestRFR:
    def test_constant_targets(self):
        rng = np.random.default_rng(5)
        x = rng.random((40, 3))
        model = RandomForestModel(n_estimators=20).fit(x, np.full(40, 3.5), RandomStream(1))
        np.testing.assert_allclose(model.predict(rng.random((10, 3))), 3.5)

    def test_single_unbounded_tree_reproduces_training_points(self):
        rng = np.random.default_rng(6)
        x = rng.random((30, 4))
        y = rng.normal(size=30)
        model = RandomForestModel(n_estimators=1, max_depth=None, bootstrap=False)
        model.fit(x, y, RandomStream(2))
        np.testing.assert_allclose(model.predict(x), y, atol=1e-12)

    def test_prediction_is_mean_of_trees(self):
        rng = np.random.default_rng(7)
        x = rng.random((50, 3))
        y = rng.normal(size=50)
        model = RandomForestModel(n_estimators=30).fit(x, y, RandomStream(3))
        q = rng.random((15, 3))
        per_tree = model.per_tree_predictions(q)
        np.testing.assert_allclose(model.predict(q), per_tree.mean(axis=0), atol=1e-12)

    def test_prediction_within_target_range(self):
        rng = np.random.default_rng(8)
        x = rng.random((60, 5))
        y = rng.normal(size=60)
        model = RandomForestModel().fit(x, y, RandomStream(4))
        pred = model.predict(rng.random((100, 5)))
        assert pred.min() >= y.min() - 1e-12
        assert pred.max() <= y.max() + 1e-12

    def test_seeded_reproducibility(self):
        rng = np.random.default_rng(9)
        x = rng.random((40, 3))
        y = rng.normal(size=40)
        q = rng.random((10, 3))
        a = RandomForestModel(n_estimators=25).fit(x, y, RandomStream(77)).predict(q)
        b = RandomForestModel(n_estimators=25).fit(x, y, RandomStream(77)).predict(q)
        np.testing.assert_array_equal(a, b)


class TestConvNet:
    def test_too_short_input_rejected(self):
        with pytest.raises(ValueError, match="kernel"):
            ConvNet1D(4, RandomStream(0))

    def test_zero_weights_give_bias_output(self):
        net = ConvNet1D(8, RandomStream(1))
        for key in net.params:
            net.params[key] = np.zeros_like(net.params[key])
        net.params["b4"] = np.array([2.5])
        out = net.predict(np.random.default_rng(0).random((3, 8)))
        np.testing.assert_allclose(out, 2.5)

    def test_analytic_gradients_match_finite_differences(self):
        rng = np.random.default_rng(10)
        net = ConvNet1D(7, RandomStream(11))
        x = rng.random((5, 7))
        y = rng.normal(size=5)
        _, grads = net.loss_and_gradients(x, y)
        eps = 1e-6
        for key, grad in grads.items():
            flat_param = net.params[key].reshape(-1)
            flat_grad = np.asarray(grad).reshape(-1)
            # Check a deterministic subset of coordinates per parameter.
            coords = range(0, len(flat_param), max(1, len(flat_param) // 25))
            for c in coords:
                orig = flat_param[c]
                flat_param[c] = orig + eps
                up, _ = net.loss_and_gradients(x, y)
                flat_param[c] = orig - eps
                down, _ = net.loss_and_gradients(x, y)
                flat_param[c] = orig
                fd = (up - down) / (2 * eps)
                denom = max(abs(fd), abs(flat_grad[c]), 1e-8)
                assert abs(fd - flat_grad[c]) / denom < 1e-4, (key, c)

    def test_training_reduces_loss(self):
        rng = np.random.default_rng(12)
        x = rng.random((32, 6))
        y = (x[:, 0] + 0.5 * x[:, 1]).ravel()
        net = ConvNet1D(6, RandomStream(13))
        before, _ = net.loss_and_gradients(x, y)
        net.fit(x, y, RandomStream(14), learning_rate=3e-3, epochs=60, batch_size=16)
        after, _ = net.loss_and_gradients(x, y)
        assert after < before

    def test_predict_deterministic_and_fit_reproducible(self):
        rng = np.random.default_rng(15)
        x = rng.random((20, 6))
        y = rng.normal(size=20)

        def train():
            net = ConvNet1D(6, RandomStream(21))
            net.fit(x, y, RandomStream(22), learning_rate=1e-3, epochs=10, batch_size=8)
            return net.predict(x)

        np.testing.assert_array_equal(train(), train())


class TestRandomizedSearch:
    def test_single_candidate_returned(self):
        spec = CVSpec("gpr", {"length_scale": [0.5], "noise": [1e-6]},
                      n_candidates=1, n_folds=2)
        rng = np.random.default_rng(16)
        x = rng.random((20, 2))
        y = rng.normal(size=20)
        params, score = randomized_search_cv(spec, x, y, RandomStream(5))
        assert params == {"length_scale": 0.5, "noise": 1e-6}
        assert np.isfinite(score)

    def test_better_candidate_wins_on_linear_data(self):
        # A single deep tree fits noiseless linear data far better than a
        # stump; the search must pick the deep configuration.
        rng = np.random.default_rng(17)
        x = rng.random((60, 1))
        y = 3.0 * x[:, 0]
        spec = CVSpec("rfr", {"n_estimators": [30], "max_depth": [1, None],
                              "min_samples_split": [2]},
                      n_candidates=6, n_folds=3)
        params, _ = randomized_search_cv(spec, x, y, RandomStream(6))
        assert params["max_depth"] is None

    def test_same_seed_same_winner(self):
        rng = np.random.default_rng(18)
        x = rng.random((30, 3))
        y = rng.normal(size=30)
        spec = default_cv_spec("gpr")
        a = randomized_search_cv(spec, x, y, RandomStream(9))
        b = randomized_search_cv(spec, x, y, RandomStream(9))
        assert a == b

    def test_too_few_samples_rejected(self):
        spec = default_cv_spec("gpr")
        with pytest.raises(ValueError):
            randomized_search_cv(spec, np.zeros((2, 1)), np.zeros(2), RandomStream(0))


class TestEnsemble:
    def _toy_population(self, m=3, n=6, size=40, seed=19):
        rng = np.random.default_rng(seed)
        x = rng.random((size, n))
        f = np.column_stack([x[:, :2].sum(axis=1) + j for j in range(m)])
        return make_population(x, f)

    def test_one_model_per_objective(self):
        pop = self._toy_population(m=3)
        spec = CVSpec("gpr", {"length_scale": [1.0], "noise": [1e-6]},
                      n_candidates=1, n_folds=2)
        ens = train_ensemble(pop, "gpr", spec, RandomStream(31))
        assert ens.n_objectives == 3
        assert len(ens.training_times) == 3
        assert all(t > 0 for t in ens.training_times)

    def test_estimate_shape_and_finiteness(self):
        pop = self._toy_population(m=3)
        spec = CVSpec("rfr", {"n_estimators": [10], "max_depth": [None],
                              "min_samples_split": [2]}, n_candidates=1, n_folds=2)
        ens = train_ensemble(pop, "rfr", spec, RandomStream(32))
        est = ens.estimate(np.full(6, 0.5))
        assert est.shape == (3,)
        assert np.all(np.isfinite(est))
        batch = ens.estimate_batch(np.random.default_rng(0).random((7, 6)))
        assert batch.shape == (7, 3)

    def test_mismatched_cv_kind_rejected(self):
        pop = self._toy_population()
        with pytest.raises(ValueError):
            train_ensemble(pop, "gpr", default_cv_spec("rfr"), RandomStream(0))

    def test_gpr_ensemble_learns_smooth_objectives(self):
        # Accuracy smoke test: estimates track a smooth target closely.
        rng = np.random.default_rng(20)
        x = rng.random((100, 4))
        f = np.column_stack([np.sum((x - 0.3) ** 2, axis=1),
                             np.sum((x - 0.7) ** 2, axis=1)])
        pop = make_population(x, f)
        ens = train_ensemble(pop, "gpr", default_cv_spec("gpr"), RandomStream(33))
        q = rng.random((50, 4))
        want = np.column_stack([np.sum((q - 0.3) ** 2, axis=1),
                                np.sum((q - 0.7) ** 2, axis=1)])
        got = ens.estimate_batch(q)
        rel_err = np.abs(got - want).mean() / want.mean()
        assert rel_err < 0.1
