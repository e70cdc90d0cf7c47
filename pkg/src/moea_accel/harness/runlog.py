"""Per-run logs: a deterministic metrics CSV, a manifest, and a timing
sidecar (wall-clock timings are kept out of the deterministic CSV)."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

CSV_SCHEMA = "moea-accel-runlog-v1"
MANIFEST_SCHEMA = "moea-accel-manifest-v1"

COLUMNS = (
    "generation",
    "evaluations",
    "relative_hv",
    "igd",
    "spread",
    "surrogate_share",
    "peak_share",
    "surrogate_active",
    "surrogate_transferred",
)


@dataclass
class GenerationRow:
    generation: int
    evaluations: int
    relative_hv: float
    igd: float
    spread: float | None = None
    surrogate_share: float | None = None
    peak_share: float | None = None
    surrogate_active: bool = False
    surrogate_transferred: int = 0


@dataclass
class RunLog:
    manifest: dict
    rows: list[GenerationRow] = field(default_factory=list)
    timings: list[tuple[int, int, float]] = field(default_factory=list)

    def validate(self) -> None:
        gens = [r.generation for r in self.rows]
        evals = [r.evaluations for r in self.rows]
        if gens != sorted(set(gens)):
            raise ValueError("generations must be strictly increasing")
        if evals != sorted(set(evals)):
            raise ValueError("evaluation counts must be strictly increasing")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return f"{value:.17g}"


def write_run_csv(path: Path, log: RunLog) -> None:
    log.validate()
    lines = [f"# schema={CSV_SCHEMA}", ",".join(COLUMNS)]
    for r in log.rows:
        lines.append(",".join([
            _fmt(r.generation), _fmt(r.evaluations), _fmt(r.relative_hv),
            _fmt(r.igd), _fmt(r.spread), _fmt(r.surrogate_share),
            _fmt(r.peak_share), _fmt(r.surrogate_active),
            _fmt(r.surrogate_transferred),
        ]))
    path.write_text("\n".join(lines) + "\n")


def write_manifest(path: Path, manifest: dict) -> None:
    lines = [f"schema={MANIFEST_SCHEMA}"]
    for key in sorted(manifest):
        lines.append(f"{key}={manifest[key]}")
    path.write_text("\n".join(lines) + "\n")


def write_timings(path: Path, log: RunLog) -> None:
    lines = ["generation,objective,seconds"]
    for gen, obj, seconds in log.timings:
        lines.append(f"{gen},{obj},{seconds:.6f}")
    path.write_text("\n".join(lines) + "\n")


def read_run_csv(path: Path) -> list[GenerationRow]:
    rows = []
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("# schema="):
        raise ValueError(f"{path}: missing schema header")
    header = lines[1].split(",")
    if tuple(header) != COLUMNS:
        raise ValueError(f"{path}: unexpected columns {header}")
    for line in lines[2:]:
        if not line:
            continue
        parts = line.split(",")
        rows.append(GenerationRow(
            generation=int(parts[0]),
            evaluations=int(parts[1]),
            relative_hv=float(parts[2]),
            igd=float(parts[3]),
            spread=float(parts[4]) if parts[4] else None,
            surrogate_share=float(parts[5]) if parts[5] else None,
            peak_share=float(parts[6]) if parts[6] else None,
            surrogate_active=parts[7] == "1",
            surrogate_transferred=int(parts[8]),
        ))
    return rows


def read_manifest(path: Path) -> dict:
    manifest = {}
    for line in path.read_text().splitlines():
        if not line:
            continue
        key, _, value = line.partition("=")
        manifest[key] = value
    if manifest.get("schema") != MANIFEST_SCHEMA:
        raise ValueError(f"{path}: unexpected manifest schema")
    return manifest
