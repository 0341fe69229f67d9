"""
CSV tables and the checksum manifest written by every command.
"""

import csv
import hashlib
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import yaml

from .. import __version__
from ..config import ExperimentSpec, RunSpec
from ..solvers.trace import format_value

MANIFEST_NAME = "manifest.yaml"


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def write_rows(path: Path, columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> None:
    """Header plus one line per row; missing values are empty fields."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(column)) for column in columns])


def write_summaries(path: Path, summaries: Sequence[tuple[RunSpec, str]]) -> None:
    """Merge per-run two-line summary records into one table keyed by point and repeat."""
    lines = []
    for run, text in summaries:
        header, values = text.strip().splitlines()
        if not lines:
            lines.append(f"point,repeat,{header}")
        lines.append(f"{run.point.index},{run.repeat},{values}")
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")


def write_manifest(
    out_dir: Path,
    command: str,
    spec: ExperimentSpec,
    runs: Sequence[RunSpec],
    files: Sequence[Path],
    config_path: Optional[Path] = None,
) -> Path:
    """Seeds and sha256 checksums of the config and of every produced file."""
    manifest: dict[str, Any] = {
        "tool": f"tubal-solve {__version__}",
        "command": command,
        "master_seed": spec.seed,
    }
    if config_path is not None:
        manifest["config"] = {"path": config_path.name, "sha256": sha256_file(config_path)}
    manifest["runs"] = [
        {"point": run.point.index, "repeat": run.repeat, "seed": run.seed} for run in runs
    ]
    manifest["files"] = {
        path.relative_to(out_dir).as_posix(): sha256_file(path) for path in sorted(files)
    }
    path = out_dir / MANIFEST_NAME
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(manifest, f, default_flow_style=False, sort_keys=False)
    return path
