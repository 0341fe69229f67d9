"""
Sensing recovery runs: initialization, FGD and validation early stopping.
"""

from pathlib import Path

from ..config import ExperimentSpec, RunSpec
from ..solvers import run_with_early_stopping, split
from .base import Command, RunOutcome
from .instances import sensing_instance, solver_config

RECOVER_COLUMNS = (
    "n", "k", "r", "R", "m", "sigma", "eta", "init", "repeat",
    "rse_best", "rse_es", "rse_final", "t_check", "error",
)


class RecoverCommand(Command):
    name = "recover"
    description = "FGD with early stopping on every grid point; one row per repeat"
    columns = RECOVER_COLUMNS
    group_by = ("n", "k", "r", "R", "m", "sigma", "eta", "init")
    metrics = ("rse_best", "rse_es", "rse_final", "t_check")

    def run_one(self, spec: ExperimentSpec, run: RunSpec, out_dir: Path) -> RunOutcome:
        point = run.point
        instance = sensing_instance(spec, point, run.seed)
        plan = split(point.m, point.val_frac, run.seed)
        result = run_with_early_stopping(
            instance.op, instance.y, solver_config(spec, point, run.seed), plan,
            truth=instance.truth,
        )
        row = self.base_row(run)
        row["rse_best"] = result.rse_best
        row["rse_es"] = result.rse_at_t_check
        row["rse_final"] = result.trace.final().rse
        row["t_check"] = result.t_check
        files = self.write_trace(run, result.trace, out_dir)
        return RunOutcome(
            row=row,
            iterations=len(result.trace) - 1,
            files=files,
            summary=result.summary_csv(),
        )

    def write_trace(self, run: RunSpec, trace, out_dir: Path) -> list[str]:
        return []


class SweepCommand(RecoverCommand):
    """The recover grid plus one trace CSV per run under ``traces/``."""

    name = "sweep"
    description = "Recover grid with per-run trajectories for plotting"

    def write_trace(self, run: RunSpec, trace, out_dir: Path) -> list[str]:
        name = f"traces/point{run.point.index:03d}_rep{run.repeat:02d}.csv"
        (out_dir / "traces").mkdir(parents=True, exist_ok=True)
        # wall-clock timings would break byte-identical reruns
        trace.write_csv(out_dir / name, include_val_loss=True, timing=False)
        return [name]
