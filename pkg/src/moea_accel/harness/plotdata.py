"""Tidy plot-ready tables extracted from an aggregate report."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def emit_plot_data(report_path: Path, out_dir: Path) -> list[Path]:
    """Write one tidy table per figure family (convergence curves, boxplot
    quantiles per 2000-evaluation checkpoint, gain curves, significance
    counters, deactivation statistics)."""
    report = json.loads(Path(report_path).read_text())
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    convergence = ["problem,solver,generation,mean_hv,median_hv"]
    gain = ["problem,solver,generation,gain"]
    deact = ["problem,solver,min,mean,max,runs_recorded"]
    pooled: dict[tuple[str, int], list[float]] = {}
    for problem, entry in sorted(report.get("per_problem", {}).items()):
        for solver, data in sorted(entry["solvers"].items()):
            for g, (mh, dh) in enumerate(zip(data["mean_hv"], data["median_hv"])):
                convergence.append(f"{problem},{solver},{g},{mh:.17g},{dh:.17g}")
            for checkpoint, values in data.get("checkpoint_values", {}).items():
                pooled.setdefault((solver, int(checkpoint)), []).extend(values)
            if "gain" in data:
                for g, value in enumerate(data["gain"]):
                    gain.append(f"{problem},{solver},{g},{value:.17g}")
                d = data["deactivation"]
                deact.append(
                    f"{problem},{solver},{'' if d['min'] is None else d['min']},"
                    f"{'' if d['mean'] is None else format(d['mean'], '.17g')},"
                    f"{'' if d['max'] is None else d['max']},{d['runs_recorded']}")

    boxplot = ["solver,evaluations,min,q1,median,q3,max,count"]
    for (solver, checkpoint), values in sorted(pooled.items()):
        if not values:
            continue
        arr = np.asarray(values)
        q1, med, q3 = np.percentile(arr, [25, 50, 75])
        boxplot.append(
            f"{solver},{checkpoint},{arr.min():.17g},{q1:.17g},{med:.17g},"
            f"{q3:.17g},{arr.max():.17g},{len(arr)}")

    counts = ["solver,generation,problems_significant"]
    for solver, series in sorted(report.get("significance_counts", {}).items()):
        for g, c in enumerate(series):
            counts.append(f"{solver},{g},{c}")

    outputs = {
        "convergence.csv": convergence,
        "boxplot.csv": boxplot,
        "gain_curves.csv": gain,
        "significance_counts.csv": counts,
        "deactivation.csv": deact,
    }
    paths = []
    for name, lines in outputs.items():
        path = out_dir / name
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    return paths
