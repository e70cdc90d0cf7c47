"""Per-objective regression surrogates trained on-the-fly."""

from .cnn import ConvNet1D
from .gpr import GaussianProcessModel
from .rfr import RandomForestModel
from .scaling import MinimaxScaler
from .training import (
    MODEL_KINDS,
    CVSpec,
    SurrogateEnsemble,
    TrainingSet,
    build_training_set,
    default_cv_spec,
    fit_model,
    randomized_search_cv,
    train_ensemble,
)

__all__ = [
    "MODEL_KINDS",
    "CVSpec",
    "ConvNet1D",
    "GaussianProcessModel",
    "MinimaxScaler",
    "RandomForestModel",
    "SurrogateEnsemble",
    "TrainingSet",
    "build_training_set",
    "default_cv_spec",
    "fit_model",
    "randomized_search_cv",
    "train_ensemble",
]
