"""Aggregation of run logs into comparison reports.

Takes one directory per (problem, host, surrogate) configuration plus
baseline directories (surrogate "none"), checks compatibility, and emits
mean/gain/deactivation/significance tables and a machine-readable
report.json for plot-data extraction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..indicators import mann_whitney_u, normalize_igd
from .runlog import GenerationRow, read_manifest, read_run_csv

REPORT_SCHEMA = "moea-accel-report-v1"
ALPHA = 0.05
CHECKPOINT_STEP = 2000


@dataclass
class LoadedRuns:
    manifest: dict
    rows_per_run: list[list[GenerationRow]]
    deactivations: list[int]

    @property
    def problem(self) -> str:
        return self.manifest["problem"]

    @property
    def surrogate(self) -> str:
        return self.manifest["surrogate"]


def load_run_dir(path: Path) -> LoadedRuns:
    path = Path(path)
    csvs = sorted(p for p in path.glob("run_*.csv") if not p.name.endswith("_timings.csv"))
    if not csvs:
        raise ValueError(f"no run CSV files found in {path}")
    manifests = []
    rows_per_run = []
    deactivations = []
    for csv_path in csvs:
        manifest = read_manifest(csv_path.with_name(csv_path.stem + ".manifest.txt"))
        manifests.append(manifest)
        rows_per_run.append(read_run_csv(csv_path))
        if manifest.get("deactivation_generation"):
            deactivations.append(int(manifest["deactivation_generation"]))
    shared_keys = ("problem", "host", "surrogate", "budget", "population_size",
                   "generations")
    first = manifests[0]
    for m in manifests[1:]:
        for key in shared_keys:
            if m.get(key) != first.get(key):
                raise ValueError(
                    f"{path}: runs disagree on {key} ({m.get(key)} vs {first.get(key)})")
    # Canonicalise run order by content so aggregates are permutation
    # invariant down to floating-point summation order.
    order = sorted(range(len(rows_per_run)),
                   key=lambda i: tuple(r.relative_hv for r in rows_per_run[i]))
    rows_per_run = [rows_per_run[i] for i in order]
    return LoadedRuns(first, rows_per_run, sorted(deactivations))


def _series(loaded: LoadedRuns, attr: str) -> np.ndarray:
    """(runs, generations) matrix of one row attribute."""
    return np.asarray([[getattr(r, attr) for r in rows] for rows in loaded.rows_per_run])


def _checkpoints(budget: int) -> list[int]:
    return list(range(CHECKPOINT_STEP, budget + 1, CHECKPOINT_STEP))


def _checkpoint_values(loaded: LoadedRuns, checkpoints: list[int]) -> dict[str, list[float]]:
    values: dict[str, list[float]] = {str(c): [] for c in checkpoints}
    for rows in loaded.rows_per_run:
        evals = np.asarray([r.evaluations for r in rows])
        hv = np.asarray([r.relative_hv for r in rows])
        for c in checkpoints:
            idx = np.searchsorted(evals, c, side="right") - 1
            if idx >= 0:
                values[str(c)].append(float(hv[idx]))
    return values


def aggregate(in_dirs: list[Path], baseline_dirs: list[Path], out_dir: Path) -> dict:
    """Build the comparison report and write its tables under out_dir."""
    out_dir = Path(out_dir)
    variants = [load_run_dir(d) for d in in_dirs]
    baselines = {}
    for d in baseline_dirs:
        loaded = load_run_dir(d)
        if loaded.surrogate != "none":
            raise ValueError(f"{d}: baseline directory must hold surrogate-free runs, "
                             f"found '{loaded.surrogate}'")
        baselines[loaded.problem] = loaded
    if not baselines:
        raise ValueError("at least one baseline directory is required")

    reference = next(iter(baselines.values())).manifest
    for loaded in list(baselines.values()) + variants:
        for key in ("host", "budget", "population_size", "generations"):
            if loaded.manifest.get(key) != reference.get(key):
                raise ValueError(
                    f"configuration mismatch on {key}: {loaded.manifest.get(key)} "
                    f"vs {reference.get(key)}")

    generations = int(reference["generations"])
    budget = int(reference["budget"])
    checkpoints = _checkpoints(budget)
    report = {
        "schema": REPORT_SCHEMA,
        "host": reference["host"],
        "budget": budget,
        "population_size": int(reference["population_size"]),
        "generations": generations,
        "alpha": ALPHA,
        "checkpoints": checkpoints,
        "problems": sorted(baselines),
        "per_problem": {},
        "significance_counts": {},
    }

    # Group variants per problem; every variant needs its baseline. A
    # surrogate-free variant is allowed (it compares the baseline against
    # itself, giving a zero gain series).
    per_problem_variants: dict[str, list[LoadedRuns]] = {p: [] for p in baselines}
    for loaded in variants:
        if loaded.problem not in baselines:
            raise ValueError(f"variant for {loaded.problem} has no matching baseline")
        per_problem_variants[loaded.problem].append(loaded)

    sig_counts: dict[str, np.ndarray] = {}
    for problem, base in sorted(baselines.items()):
        base_hv = _series(base, "relative_hv")
        # Per-problem IGD normalisation batch: every run, generation and
        # solver aggregated in this invocation.
        igd_matrices = [_series(base, "igd")] + \
            [_series(v, "igd") for v in per_problem_variants[problem]]
        flat = np.concatenate([m.ravel() for m in igd_matrices])
        normed = normalize_igd(flat)
        splits = np.cumsum([m.size for m in igd_matrices])[:-1]
        normed_parts = np.split(normed, splits)
        entry = {
            "solvers": {
                "none": {
                    "runs": len(base.rows_per_run),
                    "mean_hv": base_hv.mean(axis=0).tolist(),
                    "median_hv": np.median(base_hv, axis=0).tolist(),
                    "mean_igd_norm": normed_parts[0].reshape(base_hv.shape).mean(axis=0).tolist(),
                    "checkpoint_values": _checkpoint_values(base, checkpoints),
                },
            },
        }
        for v_idx, variant in enumerate(per_problem_variants[problem]):
            hv = _series(variant, "relative_hv")
            mean_hv = hv.mean(axis=0)
            gain = mean_hv - base_hv.mean(axis=0)
            pvalues, significant = [], []
            for g in range(generations):
                p = mann_whitney_u(base_hv[:, g], hv[:, g], "a_less")
                pvalues.append(p)
                significant.append(bool(p < ALPHA))
            deact = variant.deactivations
            stats = {
                "min": int(min(deact)) if deact else None,
                "mean": float(np.mean(deact)) if deact else None,
                "max": int(max(deact)) if deact else None,
                "runs_recorded": len(deact),
            }
            igd_part = normed_parts[v_idx + 1].reshape(hv.shape)
            entry["solvers"][variant.surrogate] = {
                "runs": len(variant.rows_per_run),
                "mean_hv": mean_hv.tolist(),
                "median_hv": np.median(hv, axis=0).tolist(),
                "mean_igd_norm": igd_part.mean(axis=0).tolist(),
                "gain": gain.tolist(),
                "pvalues": pvalues,
                "significant": significant,
                "deactivation": stats,
                "checkpoint_values": _checkpoint_values(variant, checkpoints),
                "mw_total_samples": len(base.rows_per_run) + len(variant.rows_per_run),
                "mw_method": "exact" if len(base.rows_per_run)
                + len(variant.rows_per_run) <= 20 else "normal_approx",
            }
            counts = sig_counts.setdefault(variant.surrogate,
                                           np.zeros(generations, dtype=int))
            counts += np.asarray(significant, dtype=int)
        report["per_problem"][problem] = entry

    report["significance_counts"] = {k: v.tolist() for k, v in sig_counts.items()}

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(report, indent=1, sort_keys=True))
    _write_tables(report, out_dir)
    return report


def _write_tables(report: dict, out_dir: Path) -> None:
    mean_lines = ["problem,solver,generation,mean_hv,median_hv,mean_igd_norm"]
    gain_lines = ["problem,solver,generation,gain"]
    sig_lines = ["problem,solver,generation,p_value,significant"]
    deact_lines = ["problem,solver,min,mean,max,runs_recorded"]
    for problem, entry in sorted(report["per_problem"].items()):
        for solver, data in sorted(entry["solvers"].items()):
            for g, (mh, dh, gi) in enumerate(zip(data["mean_hv"], data["median_hv"],
                                                 data["mean_igd_norm"])):
                mean_lines.append(f"{problem},{solver},{g},{mh:.17g},{dh:.17g},{gi:.17g}")
            if "gain" in data:
                for g, value in enumerate(data["gain"]):
                    gain_lines.append(f"{problem},{solver},{g},{value:.17g}")
                for g, (p, s) in enumerate(zip(data["pvalues"], data["significant"])):
                    sig_lines.append(f"{problem},{solver},{g},{p:.17g},{int(s)}")
                d = data["deactivation"]
                deact_lines.append(
                    f"{problem},{solver},{'' if d['min'] is None else d['min']},"
                    f"{'' if d['mean'] is None else format(d['mean'], '.17g')},"
                    f"{'' if d['max'] is None else d['max']},{d['runs_recorded']}")
    counts_lines = ["solver,generation,problems_significant"]
    for solver, counts in sorted(report["significance_counts"].items()):
        for g, c in enumerate(counts):
            counts_lines.append(f"{solver},{g},{c}")
    (out_dir / "mean_hv.csv").write_text("\n".join(mean_lines) + "\n")
    (out_dir / "gain.csv").write_text("\n".join(gain_lines) + "\n")
    (out_dir / "significance.csv").write_text("\n".join(sig_lines) + "\n")
    (out_dir / "deactivation_stats.csv").write_text("\n".join(deact_lines) + "\n")
    (out_dir / "significance_counts.csv").write_text("\n".join(counts_lines) + "\n")
