"""
Synthetic sensing instances written to disk.
"""

from pathlib import Path

from ..algebra import tubal_rank, write_tensor
from ..config import ExperimentSpec, RunSpec
from ..sensing import write_operator, write_vector
from .base import Command, RunOutcome
from .instances import sensing_instance


class SynthCommand(Command):
    name = "synth"
    description = "Generate X_factor, X_star, the operator, the noise and y for every grid point"
    columns = (
        "n", "k", "r", "m", "sigma", "noise", "repeat", "seed", "tubal_rank", "frobenius",
        "directory", "error",
    )

    def run_one(self, spec: ExperimentSpec, run: RunSpec, out_dir: Path) -> RunOutcome:
        instance = sensing_instance(spec, run.point, run.seed)
        directory = f"point{run.point.index:03d}_rep{run.repeat:02d}"
        target = out_dir / directory
        target.mkdir(parents=True, exist_ok=True)

        write_tensor(target / "X_factor.tbl", instance.truth.X_factor)
        write_tensor(target / "X_star.tbl", instance.truth.X_star)
        write_operator(target / "operator.tsn", instance.op)
        write_vector(target / "noise.vec", instance.noise)
        write_vector(target / "y.vec", instance.y)
        names = ("X_factor.tbl", "X_star.tbl", "operator.tsn", "noise.vec", "y.vec")

        row = self.base_row(run)
        row["tubal_rank"] = tubal_rank(instance.truth.X_star)
        row["frobenius"] = instance.truth.X_star.frobenius()
        row["directory"] = directory
        return RunOutcome(row=row, files=[f"{directory}/{name}" for name in names])
