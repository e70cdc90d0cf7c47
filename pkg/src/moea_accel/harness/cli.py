"""Command-line experiment driver."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .aggregate import aggregate
from .config import (
    DESK_PRESET_BUDGET,
    DESK_PRESET_PROBLEMS,
    DESK_PRESET_RUNS,
    SURROGATE_KINDS,
    RunConfig,
)
from .experiment import run_experiment
from .plotdata import emit_plot_data


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moea-accel",
        description="Surrogate-accelerated multi-objective optimisation experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute seeded runs for one configuration")
    run.add_argument("--problem", action="append", default=None,
                     help="benchmark problem name (repeatable)")
    run.add_argument("--host", choices=("nsgaii", "moead"), default="nsgaii")
    run.add_argument("--surrogate", choices=SURROGATE_KINDS, default="none")
    run.add_argument("--budget", type=int, default=50_000,
                     help="total true fitness evaluations per run")
    run.add_argument("--runs", type=int, default=100)
    run.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed+i")
    run.add_argument("--fraction", type=float, default=0.5,
                     help="share of offspring taken from the surrogate front")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--objectives", type=int, default=None,
                     help="objective-count override (DTLZ only)")
    run.add_argument("--population", type=int, default=None)
    run.add_argument("--indicator-samples", type=int, default=5000)
    run.add_argument("--cv-candidates", type=int, default=None)
    run.add_argument("--cv-folds", type=int, default=None)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--preset", choices=("desk",), default=None,
                     help="desk preset: 10 runs, 10000 evaluations, suite subset")

    agg = sub.add_parser("aggregate", help="aggregate run directories into a report")
    agg.add_argument("--in", dest="in_dirs", action="append", required=True,
                     help="variant run directory (repeatable)")
    agg.add_argument("--baseline", dest="baseline_dirs", action="append", required=True,
                     help="baseline (surrogate none) run directory (repeatable)")
    agg.add_argument("--out", required=True)

    plot = sub.add_parser("plot-data", help="emit tidy plot tables from a report")
    plot.add_argument("--report", required=True)
    plot.add_argument("--out", required=True)
    return parser


def _run_command(args) -> int:
    budget = args.budget
    runs = args.runs
    problems = args.problem
    if args.preset == "desk":
        budget = DESK_PRESET_BUDGET if args.budget == 50_000 else args.budget
        runs = DESK_PRESET_RUNS if args.runs == 100 else args.runs
        if problems is None:
            problems = list(DESK_PRESET_PROBLEMS)
    if problems is None:
        raise ValueError("--problem is required unless --preset supplies a subset")
    for name in problems:
        config = RunConfig(
            problem=name, host=args.host, surrogate=args.surrogate,
            out_dir=Path(args.out), budget=budget, runs=runs, seed=args.seed,
            fraction=args.fraction, indicator_samples=args.indicator_samples,
            objectives=args.objectives, population_size=args.population,
            cv_candidates=args.cv_candidates, cv_folds=args.cv_folds,
            workers=args.workers,
        )
        written = run_experiment(config)
        print(f"{name}: wrote {len(written)} runs to {config.run_dir()}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run_command(args)
        if args.command == "aggregate":
            aggregate([Path(d) for d in args.in_dirs],
                      [Path(d) for d in args.baseline_dirs], Path(args.out))
            print(f"report written to {Path(args.out) / 'report.json'}")
            return 0
        if args.command == "plot-data":
            paths = emit_plot_data(Path(args.report), Path(args.out))
            print(f"wrote {len(paths)} tables to {args.out}")
            return 0
        raise ValueError(f"unknown command {args.command}")
    except Exception as exc:  # single-line diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
