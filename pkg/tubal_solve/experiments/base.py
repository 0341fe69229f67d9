"""
Base experiment command interface and registry.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Optional

from .. import stats
from ..config import ExperimentSpec, RunSpec
from ..runs import RunBoard, RunStatus
from .aggregate import aggregate_rows
from .output import write_manifest, write_rows, write_summaries
from .parallel import run_grid

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    success: bool
    output: str
    error: Optional[str] = None
    columns: tuple[str, ...] = ()
    rows: list[dict[str, Any]] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    board: Optional[RunBoard] = None


@dataclass
class RunOutcome:
    row: dict[str, Any]
    iterations: int = 0
    files: list[str] = field(default_factory=list)
    summary: Optional[str] = None

    @property
    def failed(self) -> bool:
        return bool(self.row.get("error"))


def execute_run(command: "Command", spec: ExperimentSpec, out_dir: Path, run: RunSpec) -> RunOutcome:
    """Worker entry point: one grid point and repeat, failures folded into an error row."""
    try:
        return command.run_one(spec, run, out_dir)
    except Exception as exc:
        logger.debug("run %d/%d failed", run.point.index, run.repeat, exc_info=True)
        return RunOutcome(row=command.error_row(run, exc))


class Command(ABC):
    name: str
    description: str
    columns: tuple[str, ...]
    group_by: tuple[str, ...] = ()
    metrics: tuple[str, ...] = ()

    @abstractmethod
    def run_one(self, spec: ExperimentSpec, run: RunSpec, out_dir: Path) -> RunOutcome:
        pass

    def base_row(self, run: RunSpec) -> dict[str, Any]:
        row: dict[str, Any] = {}
        for column in self.columns:
            if column == "repeat":
                row[column] = run.repeat
            elif column == "seed":
                row[column] = run.seed
            else:
                row[column] = getattr(run.point, column, None)
        return row

    def error_row(self, run: RunSpec, exc: BaseException) -> dict[str, Any]:
        row = self.base_row(run)
        row["error"] = f"{type(exc).__name__}: {exc}".replace("\n", " ")
        return row

    async def execute(
        self, spec: ExperimentSpec, out_dir: Path, config_path: Optional[Path] = None,
        aggregate: bool = False,
    ) -> CommandResult:
        out_dir.mkdir(parents=True, exist_ok=True)
        runs = spec.runs()
        board = RunBoard(title=f"{self.name} runs")
        for run in runs:
            board.add_run(f"point {run.point.index} repeat {run.repeat}")

        results = await run_grid(
            partial(execute_run, self, spec, out_dir), runs, spec.workers, self.name, board
        )
        outcomes = []
        for index, (run, result) in enumerate(zip(runs, results)):
            outcome = result
            if isinstance(result, BaseException):
                outcome = RunOutcome(row=self.error_row(run, result))
            board.update_run(
                index,
                RunStatus.FAILED if outcome.failed else RunStatus.COMPLETED,
                outcome.row.get("error") or "",
            )
            stats.record_run(self.name, outcome.iterations, outcome.failed)
            outcomes.append(outcome)

        rows = [outcome.row for outcome in outcomes]
        table_path = out_dir / f"{self.file_stem}.csv"
        write_rows(table_path, self.columns, rows)
        files = [table_path]
        for outcome in outcomes:
            files.extend(out_dir / name for name in outcome.files)

        summaries = [
            (run, outcome.summary) for run, outcome in zip(runs, outcomes) if outcome.summary
        ]
        if summaries:
            summary_path = out_dir / f"{self.file_stem}_summary.csv"
            write_summaries(summary_path, summaries)
            files.append(summary_path)

        if aggregate and self.metrics:
            columns, summary = aggregate_rows(rows, self.group_by, self.metrics)
            aggregate_path = out_dir / f"{self.file_stem}_aggregate.csv"
            write_rows(aggregate_path, columns, summary)
            files.append(aggregate_path)

        files.append(write_manifest(out_dir, self.name, spec, runs, files, config_path))
        failed = board.count(RunStatus.FAILED)
        output = f"{len(rows)} runs, {failed} failed -> {table_path}"
        logger.info("%s: %s", self.name, output)
        return CommandResult(
            success=failed < len(rows),
            output=output,
            error=None if failed < len(rows) else "every run failed",
            columns=self.columns,
            rows=rows,
            files=files,
            board=board,
        )

    @property
    def file_stem(self) -> str:
        return self.name.replace("-", "_")


class CommandRegistry:
    def __init__(self):
        self._commands: dict[str, Command] = {}

    def register(self, command: Command) -> None:
        self._commands[command.name] = command

    def get(self, name: str) -> Optional[Command]:
        return self._commands.get(name)

    def list_commands(self) -> list[str]:
        return list(self._commands.keys())
