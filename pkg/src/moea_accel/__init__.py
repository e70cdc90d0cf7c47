"""Surrogate-accelerated multi-objective evolutionary optimization.

A two-loop architecture: a host solver (NSGA-II or MOEA/D-DRA) performs true
fitness evaluations while an inner loop evolves offspring against
per-objective regression surrogates trained on the previous generation,
governed by an adaptive share-decay exit rule.
"""

from .accelerator import (
    AcceleratorState,
    accelerated_generation,
    consolidate_offspring,
    run_inner_loop,
)
from .core import EvalKind, Origin, Population, SolutionRecord
from .hosts import HostConfig, MoeadHost, NsgaiiHost, moead_config, nsgaii_config
from .indicators import (
    IndicatorContext,
    hypervolume,
    igd,
    make_context,
    mann_whitney_u,
    relative_hv,
    spread_delta,
)
from .problems import PROBLEM_NAMES, ProblemSpec, make_problem
from .rng import RandomStream
from .surrogates import CVSpec, SurrogateEnsemble, default_cv_spec, train_ensemble

__version__ = "0.1.0"

__all__ = [
    "AcceleratorState",
    "CVSpec",
    "EvalKind",
    "HostConfig",
    "IndicatorContext",
    "MoeadHost",
    "NsgaiiHost",
    "Origin",
    "PROBLEM_NAMES",
    "Population",
    "ProblemSpec",
    "RandomStream",
    "SolutionRecord",
    "SurrogateEnsemble",
    "accelerated_generation",
    "consolidate_offspring",
    "default_cv_spec",
    "hypervolume",
    "igd",
    "make_context",
    "make_problem",
    "mann_whitney_u",
    "moead_config",
    "nsgaii_config",
    "relative_hv",
    "run_inner_loop",
    "spread_delta",
    "train_ensemble",
    "__version__",
]
