"""Training-set construction, hyper-parameter search, and per-objective
surrogate ensembles trained on a single evaluated population."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..core import EvalKind, Population
from ..rng import RandomStream
from .cnn import ConvNet1D
from .gpr import GaussianProcessModel
from .rfr import RandomForestModel

MODEL_KINDS = ("rfr", "gpr", "cnn")


@dataclass
class TrainingSet:
    inputs: np.ndarray                 # minimax-scaled, one row per solution
    targets: list[np.ndarray]          # minimax-scaled, one vector per objective
    input_scaler: "MinimaxScaler"
    target_scalers: list["MinimaxScaler"]


def build_training_set(pop: Population) -> TrainingSet:
    """Turn one true-evaluated population into scaled inputs and targets."""
    from .scaling import MinimaxScaler

    members = list(pop)
    if not members:
        raise ValueError("population is empty")
    for rec in members:
        if rec.eval_kind is not EvalKind.TRUE_FITNESS:
            raise ValueError("training data must consist of true evaluations only")
    raw_x = np.asarray([rec.variables for rec in members], dtype=float)
    raw_f = np.asarray([rec.objectives for rec in members], dtype=float)
    input_scaler = MinimaxScaler()
    inputs = input_scaler.fit_transform(raw_x)
    targets, scalers = [], []
    for j in range(raw_f.shape[1]):
        sc = MinimaxScaler()
        targets.append(sc.fit_transform(raw_f[:, j:j + 1]).ravel())
        scalers.append(sc)
    return TrainingSet(inputs, targets, input_scaler, scalers)


# --- hyper-parameter search ----------------------------------------------------

@dataclass
class CVSpec:
    """Randomised-search cross-validation settings for one model kind.

    Distribution values are either a list of choices or a
    ("log_uniform", low, high) tuple.
    """

    model_kind: str
    distributions: dict = field(default_factory=dict)
    n_candidates: int = 8
    n_folds: int = 3

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind '{self.model_kind}'")
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be at least 1")
        if self.n_folds < 2:
            raise ValueError("n_folds must be at least 2")


def default_cv_spec(model_kind: str) -> CVSpec:
    distributions = {
        "rfr": {
            "n_estimators": [50, 100, 200],
            "max_depth": [8, 16, None],
            "min_samples_split": [2, 5],
        },
        "gpr": {
            "length_scale": ("log_uniform", 1e-2, 1e1),
            "noise": ("log_uniform", 1e-8, 1e-2),
        },
        "cnn": {
            "learning_rate": ("log_uniform", 1e-4, 1e-2),
            "epochs": [100, 200],
            "batch_size": [16, 32],
        },
    }[model_kind]
    return CVSpec(model_kind, distributions)


def _sample_params(spec: CVSpec, rng: RandomStream) -> dict:
    params = {}
    for name, dist in spec.distributions.items():
        if isinstance(dist, tuple) and dist[0] == "log_uniform":
            lo, hi = np.log(dist[1]), np.log(dist[2])
            params[name] = float(np.exp(rng.uniform(lo, hi)))
        else:
            params[name] = dist[int(rng.integers(0, len(dist)))]
    return params


def fit_model(model_kind: str, params: dict, inputs: np.ndarray,
              targets: np.ndarray, rng: RandomStream):
    """Fit one regression model; returns an object with predict_mean()."""
    if model_kind == "rfr":
        model = RandomForestModel(**params).fit(inputs, targets, rng)
        model.predict_mean = model.predict
        return model
    if model_kind == "gpr":
        return GaussianProcessModel(**params).fit(inputs, targets)
    if model_kind == "cnn":
        fit_kwargs = {k: params[k] for k in ("learning_rate", "epochs", "batch_size")
                      if k in params}
        net = ConvNet1D(inputs.shape[1], rng)
        net.fit(inputs, targets, rng, **fit_kwargs)
        net.predict_mean = net.predict
        return net
    raise ValueError(f"unknown model kind '{model_kind}'")


def randomized_search_cv(spec: CVSpec, inputs: np.ndarray, targets: np.ndarray,
                         rng: RandomStream) -> tuple[dict, float]:
    """Sample candidate parameter sets, k-fold-validate each on mean squared
    error, and return the best (ties go to the first sampled)."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float).ravel()
    n = len(inputs)
    if n < spec.n_folds:
        raise ValueError(f"need at least {spec.n_folds} samples for {spec.n_folds}-fold CV")
    candidates = [_sample_params(spec, rng) for _ in range(spec.n_candidates)]
    order = rng.permutation(n)
    folds = np.array_split(order, spec.n_folds)
    best_params, best_score = None, np.inf
    for params in candidates:
        errors = []
        for f in range(spec.n_folds):
            val_idx = folds[f]
            train_idx = np.concatenate([folds[g] for g in range(spec.n_folds) if g != f])
            model = fit_model(spec.model_kind, params,
                              inputs[train_idx], targets[train_idx], rng.split())
            pred = model.predict_mean(inputs[val_idx])
            errors.append(float(np.mean((pred - targets[val_idx]) ** 2)))
        score = float(np.mean(errors))
        if score < best_score:
            best_params, best_score = params, score
    return best_params, best_score


# --- ensembles ---------------------------------------------------------------

@dataclass
class SurrogateEnsemble:
    """One fitted regression model per objective, plus the fitted scalers."""

    model_kind: str
    models: list
    input_scaler: "MinimaxScaler"
    target_scalers: list["MinimaxScaler"]
    training_times: list[float]
    cv_params: list[dict]

    @property
    def n_objectives(self) -> int:
        return len(self.models)

    def estimate_batch(self, variables: np.ndarray) -> np.ndarray:
        """(rows, m) objective estimates for a matrix of decision vectors."""
        scaled = self.input_scaler.transform(np.atleast_2d(variables))
        cols = []
        for model, scaler in zip(self.models, self.target_scalers):
            pred = model.predict_mean(scaled)
            cols.append(scaler.inverse_transform(pred[:, None]).ravel())
        return np.column_stack(cols)

    def estimate(self, variables: np.ndarray) -> np.ndarray:
        return self.estimate_batch(variables[None, :])[0]


def train_ensemble(pop: Population, model_kind: str, cv_spec: CVSpec,
                   rng: RandomStream) -> SurrogateEnsemble:
    """Cross-validate and fit one model per objective on the given population."""
    if cv_spec.model_kind != model_kind:
        raise ValueError("cv_spec model kind does not match requested kind")
    data = build_training_set(pop)
    models, times, chosen = [], [], []
    for j, targets in enumerate(data.targets):
        obj_rng = rng.split()
        start = time.perf_counter()
        params, _ = randomized_search_cv(cv_spec, data.inputs, targets, obj_rng)
        model = fit_model(model_kind, params, data.inputs, targets, obj_rng.split())
        times.append(time.perf_counter() - start)
        models.append(model)
        chosen.append(params)
    return SurrogateEnsemble(model_kind, models, data.input_scaler,
                             data.target_scalers, times, chosen)
