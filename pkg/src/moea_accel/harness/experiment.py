"""Seeded experiment runs: one process-independent run per seed, logged to
a metrics CSV plus manifest."""

from __future__ import annotations

import concurrent.futures
import logging
from pathlib import Path

import numpy as np

from ..accelerator import AcceleratorState, accelerated_generation
from ..hosts import MoeadHost, NsgaiiHost
from ..indicators import IndicatorContext, hypervolume, igd, reference_point_for, relative_hv, spread_delta
from ..problems import make_problem
from ..problems.base import FrontSource, TruePFSample
from ..rng import RandomStream
from .config import RunConfig
from .runlog import GenerationRow, RunLog, write_manifest, write_run_csv, write_timings

logger = logging.getLogger(__name__)


def _build_context(config: RunConfig):
    problem = make_problem(config.problem, objectives=config.objectives)
    sample_size = config.indicator_samples
    if problem.front_size_limit is not None and problem.front_size_limit < sample_size:
        logger.info("%s: bundled front has %d points; clamping indicator sample "
                    "from %d", problem.name, problem.front_size_limit, sample_size)
        sample_size = problem.front_size_limit
    config.indicator_samples = sample_size
    sample = problem.sample_true_pf(sample_size)
    ref = reference_point_for(sample.points)
    h_true = hypervolume(sample.points, ref)
    ctx = IndicatorContext(ref, sample, h_true)
    return problem, ctx


def execute_single_run(config: RunConfig, run_index: int, problem=None,
                       ctx: IndicatorContext | None = None) -> RunLog:
    """Run one seeded optimisation and collect per-generation metrics."""
    if problem is None or ctx is None:
        problem, ctx = _build_context(config)
    host_cfg = config.host_config()
    seed = config.run_seed(run_index)
    rng = RandomStream(seed)
    host_cls = NsgaiiHost if config.host == "nsgaii" else MoeadHost
    host = host_cls(problem, host_cfg, rng)
    generations = host_cfg.generations
    state = None
    cv_spec = config.cv_spec()
    if config.surrogate != "none":
        state = AcceleratorState(inner_generations=generations // 2,
                                 integration_fraction=config.fraction)

    log = RunLog(manifest={})
    two_objectives = problem.m == 2

    def record(report=None):
        front = host.front_objectives()
        row = GenerationRow(
            generation=host.generation,
            evaluations=host.evaluations_used,
            relative_hv=relative_hv(front, ctx),
            igd=igd(front, ctx.true_pf.points),
            spread=spread_delta(front, ctx.true_pf.points) if two_objectives else None,
        )
        if report is not None:
            row.surrogate_share = report.share
            # Peak is logged while active and at the deactivating check, then
            # left blank for the remaining plain generations.
            if report.active or report.share is not None:
                row.peak_share = report.peak_share
            row.surrogate_active = report.active
            row.surrogate_transferred = report.transferred
            for obj_idx, seconds in enumerate(report.training_seconds):
                log.timings.append((host.generation, obj_idx, seconds))
        log.rows.append(row)

    record()
    for t in range(1, generations):
        if state is not None and t >= state.activation_generation:
            report = accelerated_generation(host, state, config.surrogate, cv_spec, rng)
            record(report)
        else:
            host.step_plain(rng)
            record()

    manifest = {
        "problem": problem.name,
        "objectives": problem.m,
        "variables": problem.n,
        "host": config.host,
        "surrogate": config.surrogate,
        "population_size": host_cfg.population_size,
        "budget": config.budget,
        "generations": generations,
        "seed": seed,
        "run_index": run_index,
        "fraction": config.fraction,
        "indicator_samples": config.indicator_samples,
        "reference_point": " ".join(f"{v:.17g}" for v in ctx.reference_point),
        "h_true": f"{ctx.h_true:.17g}",
        "deactivation_generation": "" if state is None or state.deactivation_generation is None
        else state.deactivation_generation,
        "cv_candidates": "" if cv_spec is None else cv_spec.n_candidates,
        "cv_folds": "" if cv_spec is None else cv_spec.n_folds,
    }
    log.manifest = manifest
    return log


def _write_run(run_dir: Path, run_index: int, log: RunLog) -> Path:
    stem = f"run_{run_index:03d}"
    csv_path = run_dir / f"{stem}.csv"
    write_run_csv(csv_path, log)
    write_manifest(run_dir / f"{stem}.manifest.txt", log.manifest)
    write_timings(run_dir / f"{stem}_timings.csv", log)
    return csv_path


def _worker(payload) -> str:
    config_kwargs, run_index, ctx_data = payload
    config = RunConfig(**config_kwargs)
    problem = make_problem(config.problem, objectives=config.objectives)
    ctx = IndicatorContext(
        np.asarray(ctx_data["ref"]),
        TruePFSample(np.asarray(ctx_data["points"]), FrontSource(ctx_data["source"])),
        ctx_data["h_true"],
    )
    log = execute_single_run(config, run_index, problem, ctx)
    return str(_write_run(config.run_dir(), run_index, log))


def run_experiment(config: RunConfig) -> list[Path]:
    """Execute all seeded runs for one configuration, writing one CSV,
    manifest and timing file per run."""
    problem, ctx = _build_context(config)
    run_dir = config.run_dir()
    run_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if config.workers <= 1:
        for idx in range(config.runs):
            log = execute_single_run(config, idx, problem, ctx)
            written.append(_write_run(run_dir, idx, log))
            logger.info("run %d/%d done (%s)", idx + 1, config.runs, run_dir.name)
    else:
        ctx_data = {
            "ref": ctx.reference_point.tolist(),
            "points": ctx.true_pf.points.tolist(),
            "source": ctx.true_pf.source.value,
            "h_true": ctx.h_true,
        }
        config_kwargs = {k: getattr(config, k) for k in (
            "problem", "host", "surrogate", "out_dir", "budget", "runs", "seed",
            "fraction", "indicator_samples", "objectives", "population_size",
            "cv_candidates", "cv_folds")}
        payloads = [(config_kwargs, idx, ctx_data) for idx in range(config.runs)]
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            for path in pool.map(_worker, payloads):
                written.append(Path(path))
    return written
