"""Experiment harness: seeded runs, aggregation, plot-data extraction."""

from .aggregate import aggregate, load_run_dir
from .config import DESK_PRESET_PROBLEMS, SURROGATE_KINDS, RunConfig
from .experiment import execute_single_run, run_experiment
from .plotdata import emit_plot_data
from .runlog import GenerationRow, RunLog, read_manifest, read_run_csv

__all__ = [
    "DESK_PRESET_PROBLEMS",
    "GenerationRow",
    "RunConfig",
    "RunLog",
    "SURROGATE_KINDS",
    "aggregate",
    "emit_plot_data",
    "execute_single_run",
    "load_run_dir",
    "read_manifest",
    "read_run_csv",
    "run_experiment",
]
