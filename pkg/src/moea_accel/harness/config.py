"""Experiment configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..hosts import HOST_KINDS, HostConfig, moead_config, nsgaii_config
from ..surrogates import MODEL_KINDS, CVSpec, default_cv_spec

SURROGATE_KINDS = ("none",) + MODEL_KINDS

DESK_PRESET_PROBLEMS = ("ZDT1", "ZDT3", "DTLZ2", "DTLZ7", "LZ09_F1", "WFG4", "KSW")
DESK_PRESET_RUNS = 10
DESK_PRESET_BUDGET = 10_000


@dataclass
class RunConfig:
    problem: str
    host: str
    surrogate: str
    out_dir: Path
    budget: int = 50_000
    runs: int = 100
    seed: int = 0
    fraction: float = 0.5
    indicator_samples: int = 5000
    objectives: int | None = None
    population_size: int | None = None  # None picks the host default
    cv_candidates: int | None = None
    cv_folds: int | None = None
    workers: int = 1

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if self.host not in HOST_KINDS:
            raise ValueError(f"unknown host '{self.host}'; choose from {HOST_KINDS}")
        if self.surrogate not in SURROGATE_KINDS:
            raise ValueError(
                f"unknown surrogate '{self.surrogate}'; choose from {SURROGATE_KINDS}")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError("fraction must lie in (0, 1]")
        pop = self.resolved_population_size()
        if self.budget % pop != 0:
            raise ValueError(
                f"budget {self.budget} is not divisible by population size {pop}")
        if self.budget // pop < 1:
            raise ValueError("budget must cover at least the initial population")

    def resolved_population_size(self) -> int:
        if self.population_size is not None:
            return self.population_size
        return 200 if self.host == "nsgaii" else 300

    def host_config(self) -> HostConfig:
        pop = self.resolved_population_size()
        factory = nsgaii_config if self.host == "nsgaii" else moead_config
        return factory(budget=self.budget, population_size=pop)

    def cv_spec(self) -> CVSpec | None:
        if self.surrogate == "none":
            return None
        spec = default_cv_spec(self.surrogate)
        if self.cv_candidates is not None:
            spec.n_candidates = self.cv_candidates
        if self.cv_folds is not None:
            spec.n_folds = self.cv_folds
        return spec

    def run_seed(self, run_index: int) -> int:
        return self.seed + run_index

    def run_dir(self) -> Path:
        return self.out_dir / f"{self.problem}__{self.host}__{self.surrogate}"
