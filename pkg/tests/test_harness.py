"""Tests for the experiment harness: logging, determinism, aggregation,
plot tables, and the CLI."""

import json
from pathlib import Path

import numpy as np
import pytest

from moea_accel.harness import (
    RunConfig,
    aggregate,
    emit_plot_data,
    read_manifest,
    read_run_csv,
    run_experiment,
)
from moea_accel.harness.aggregate import load_run_dir
from moea_accel.harness.cli import main as cli_main
from moea_accel.harness.runlog import (
    CSV_SCHEMA,
    GenerationRow,
    RunLog,
    write_manifest,
    write_run_csv,
)


def tiny_config(out, surrogate="none", problem="ZDT3", runs=2, seed=9, **kwargs):
    defaults = dict(budget=240, population_size=12, indicator_samples=300,
                    cv_candidates=2, cv_folds=2)
    defaults.update(kwargs)
    return RunConfig(problem=problem, host="nsgaii", surrogate=surrogate,
                     out_dir=Path(out), runs=runs, seed=seed, **defaults)


class TestRunExperiment:
    def test_row_count_matches_budget(self, tmp_path):
        config = tiny_config(tmp_path, runs=1)
        run_experiment(config)
        rows = read_run_csv(config.run_dir() / "run_000.csv")
        assert len(rows) == 240 // 12
        assert rows[0].generation == 0
        assert rows[0].evaluations == 12
        assert rows[-1].evaluations == 240

    def test_surrogate_none_has_empty_share_columns(self, tmp_path):
        config = tiny_config(tmp_path, runs=1)
        run_experiment(config)
        rows = read_run_csv(config.run_dir() / "run_000.csv")
        assert all(r.surrogate_share is None for r in rows)
        assert all(not r.surrogate_active for r in rows)
        assert all(r.surrogate_transferred == 0 for r in rows)

    def test_same_seed_byte_identical(self, tmp_path):
        cfg_a = tiny_config(tmp_path / "a", surrogate="gpr", runs=1)
        cfg_b = tiny_config(tmp_path / "b", surrogate="gpr", runs=1)
        run_experiment(cfg_a)
        run_experiment(cfg_b)
        a = (cfg_a.run_dir() / "run_000.csv").read_bytes()
        b = (cfg_b.run_dir() / "run_000.csv").read_bytes()
        assert a == b
        am = (cfg_a.run_dir() / "run_000.manifest.txt").read_bytes()
        bm = (cfg_b.run_dir() / "run_000.manifest.txt").read_bytes()
        assert am == bm

    def test_manifest_contents(self, tmp_path):
        config = tiny_config(tmp_path, surrogate="gpr", runs=1)
        run_experiment(config)
        manifest = read_manifest(config.run_dir() / "run_000.manifest.txt")
        assert manifest["problem"] == "ZDT3"
        assert manifest["surrogate"] == "gpr"
        assert manifest["budget"] == "240"
        assert manifest["seed"] == "9"
        assert "reference_point" in manifest
        assert float(manifest["h_true"]) > 0

    def test_budget_never_exceeded_and_monotone(self, tmp_path):
        config = tiny_config(tmp_path, surrogate="gpr", runs=2)
        run_experiment(config)
        for idx in range(2):
            rows = read_run_csv(config.run_dir() / f"run_{idx:03d}.csv")
            evals = [r.evaluations for r in rows]
            assert evals == sorted(evals)
            assert evals[-1] <= config.budget

    def test_evaluation_parity_between_baseline_and_accelerated(self, tmp_path):
        base = tiny_config(tmp_path / "base", surrogate="none", runs=2)
        accel = tiny_config(tmp_path / "accel", surrogate="gpr", runs=2)
        run_experiment(base)
        run_experiment(accel)
        for idx in range(2):
            rows_b = read_run_csv(base.run_dir() / f"run_{idx:03d}.csv")
            rows_a = read_run_csv(accel.run_dir() / f"run_{idx:03d}.csv")
            assert [r.evaluations for r in rows_b] == [r.evaluations for r in rows_a]

    def test_budget_divisibility_enforced(self, tmp_path):
        with pytest.raises(ValueError, match="divisible"):
            tiny_config(tmp_path, budget=250, population_size=12)

    def test_unknown_surrogate_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            RunConfig(problem="ZDT1", host="nsgaii", surrogate="svm",
                      out_dir=tmp_path)


def synthetic_run_dir(path, problem, surrogate, hv_series_per_run, deactivations,
                      budget=240, pop=12):
    """Write minimal synthetic logs for aggregation tests."""
    path.mkdir(parents=True, exist_ok=True)
    generations = budget // pop
    for idx, series in enumerate(hv_series_per_run):
        rows = []
        for g in range(generations):
            rows.append(GenerationRow(
                generation=g, evaluations=pop * (g + 1),
                relative_hv=float(series[g]), igd=1.0 / (1.0 + g), spread=0.5))
        manifest = {
            "problem": problem, "objectives": 2, "variables": 10,
            "host": "nsgaii", "surrogate": surrogate, "population_size": pop,
            "budget": budget, "generations": generations, "seed": idx,
            "run_index": idx, "fraction": 0.5, "indicator_samples": 300,
            "reference_point": "1 1", "h_true": "1",
            "deactivation_generation": deactivations[idx] if deactivations else "",
            "cv_candidates": "", "cv_folds": "",
        }
        log = RunLog(manifest=manifest, rows=rows)
        write_run_csv(path / f"run_{idx:03d}.csv", log)
        write_manifest(path / f"run_{idx:03d}.manifest.txt", manifest)
    return path


class TestAggregate:
    def test_baseline_vs_itself_zero_gain_zero_significant(self, tmp_path):
        series = [np.linspace(0, 50, 20) + i for i in range(4)]
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none", series, None)
        report = aggregate([base], [base], tmp_path / "out")
        data = report["per_problem"]["ZDT1"]["solvers"]["none"]
        assert all(g == 0.0 for g in data["gain"])
        assert sum(report["significance_counts"]["none"]) == 0

    def test_deactivation_statistics_arithmetic(self, tmp_path):
        series = [np.linspace(0, 50, 20) for _ in range(3)]
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none", series, None)
        var = synthetic_run_dir(tmp_path / "var", "ZDT1", "gpr",
                                [s + 5 for s in series], [5, 6, 9])
        report = aggregate([var], [base], tmp_path / "out")
        stats = report["per_problem"]["ZDT1"]["solvers"]["gpr"]["deactivation"]
        assert stats["min"] == 5
        assert stats["max"] == 9
        assert stats["mean"] == pytest.approx(20.0 / 3.0)
        assert stats["runs_recorded"] == 3

    def test_higher_variant_flags_significance(self, tmp_path):
        rng = np.random.default_rng(0)
        base_series = [np.linspace(0, 50, 20) + rng.normal(0, 0.1, 20)
                       for _ in range(8)]
        var_series = [s + 20.0 for s in base_series]
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none", base_series, None)
        var = synthetic_run_dir(tmp_path / "var", "ZDT1", "gpr", var_series,
                                [5] * 8)
        report = aggregate([var], [base], tmp_path / "out")
        sig = report["per_problem"]["ZDT1"]["solvers"]["gpr"]["significant"]
        assert all(sig)
        assert report["significance_counts"]["gpr"] == [1] * 20

    def test_mismatched_budget_rejected(self, tmp_path):
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none",
                                 [np.zeros(20)], None)
        var = synthetic_run_dir(tmp_path / "var", "ZDT1", "gpr",
                                [np.zeros(10)], [5], budget=120)
        with pytest.raises(ValueError, match="budget"):
            aggregate([var], [base], tmp_path / "out")

    def test_missing_baseline_rejected(self, tmp_path):
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none",
                                 [np.zeros(20)], None)
        var = synthetic_run_dir(tmp_path / "var", "ZDT2", "gpr",
                                [np.zeros(20)], [5])
        with pytest.raises(ValueError, match="baseline"):
            aggregate([var], [base], tmp_path / "out")

    def test_permutation_invariance_in_run_order(self, tmp_path):
        # Same runs written in different order produce identical aggregates.
        rng = np.random.default_rng(1)
        series = [np.sort(rng.random(20)) * 60 for _ in range(5)]
        base_a = synthetic_run_dir(tmp_path / "a", "ZDT1", "none", series, None)
        base_b = synthetic_run_dir(tmp_path / "b", "ZDT1", "none", series[::-1], None)
        rep_a = aggregate([base_a], [base_a], tmp_path / "out_a")
        rep_b = aggregate([base_b], [base_b], tmp_path / "out_b")
        assert rep_a["per_problem"]["ZDT1"]["solvers"]["none"]["mean_hv"] == \
            rep_b["per_problem"]["ZDT1"]["solvers"]["none"]["mean_hv"]


class TestPlotData:
    def test_tables_from_real_report(self, tmp_path):
        series = [np.linspace(0, 60, 20) for _ in range(3)]
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none", series, None)
        var = synthetic_run_dir(tmp_path / "var", "ZDT1", "gpr",
                                [s + 3 for s in series], [5, 5, 7])
        aggregate([var], [base], tmp_path / "agg")
        paths = emit_plot_data(tmp_path / "agg" / "report.json", tmp_path / "plots")
        names = {p.name for p in paths}
        assert names == {"convergence.csv", "boxplot.csv", "gain_curves.csv",
                         "significance_counts.csv", "deactivation.csv"}
        box = (tmp_path / "plots" / "boxplot.csv").read_text().splitlines()
        assert box[0] == "solver,evaluations,min,q1,median,q3,max,count"
        # One row per (solver, 2000-evaluation checkpoint); budget 240 has no
        # full checkpoint, so only the header appears.
        assert len(box) == 1

    def test_checkpoint_rows_when_budget_allows(self, tmp_path):
        series = [np.linspace(0, 60, 25) for _ in range(3)]
        base = synthetic_run_dir(tmp_path / "base", "ZDT1", "none", series, None,
                                 budget=5000, pop=200)
        aggregate([base], [base], tmp_path / "agg")
        emit_plot_data(tmp_path / "agg" / "report.json", tmp_path / "plots")
        box = (tmp_path / "plots" / "boxplot.csv").read_text().splitlines()
        # Checkpoints at 2000 and 4000 evaluations.
        assert len(box) == 3

    def test_empty_report_gives_headers_only(self, tmp_path):
        report = {"schema": "moea-accel-report-v1", "per_problem": {},
                  "significance_counts": {}}
        path = tmp_path / "report.json"
        path.write_text(json.dumps(report))
        paths = emit_plot_data(path, tmp_path / "plots")
        for p in paths:
            lines = p.read_text().splitlines()
            assert len(lines) == 1  # header only


class TestCli:
    def test_run_and_aggregate_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "runs"
        rc = cli_main(["run", "--problem", "ZDT3", "--host", "nsgaii",
                       "--surrogate", "none", "--budget", "240", "--runs", "2",
                       "--seed", "3", "--population", "12",
                       "--indicator-samples", "300", "--out", str(out)])
        assert rc == 0
        base_dir = out / "ZDT3__nsgaii__none"
        assert (base_dir / "run_000.csv").exists()
        rc = cli_main(["aggregate", "--in", str(base_dir), "--baseline",
                       str(base_dir), "--out", str(tmp_path / "agg")])
        assert rc == 0
        rc = cli_main(["plot-data", "--report", str(tmp_path / "agg" / "report.json"),
                       "--out", str(tmp_path / "plots")])
        assert rc == 0

    def test_bad_problem_exits_nonzero(self, tmp_path, capsys):
        rc = cli_main(["run", "--problem", "NOPE", "--out", str(tmp_path)])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_problem_without_preset(self, tmp_path, capsys):
        rc = cli_main(["run", "--out", str(tmp_path)])
        assert rc == 1

    def test_schema_header_written(self, tmp_path):
        config = tiny_config(tmp_path, runs=1)
        run_experiment(config)
        first = (config.run_dir() / "run_000.csv").read_text().splitlines()[0]
        assert first == f"# schema={CSV_SCHEMA}"
