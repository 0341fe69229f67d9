"""
Empirical t-RIP constants across measurement ratios m / (n r k).
"""

from pathlib import Path

from ..config import ExperimentSpec, RunSpec
from ..sensing import Scaling, empirical_trip_probe, make_gaussian_operator
from .base import Command, RunOutcome


class TripProbeCommand(Command):
    name = "trip-probe"
    description = "delta_hat of fresh Gaussian operators for each ratio m / (n r k)"
    columns = ("n", "k", "r", "m", "ratio", "repeat", "delta_hat", "error")
    group_by = ("n", "k", "r", "m", "ratio")
    metrics = ("delta_hat",)

    def run_one(self, spec: ExperimentSpec, run: RunSpec, out_dir: Path) -> RunOutcome:
        point = run.point
        op = make_gaussian_operator(point.n, point.k, point.m, run.seed, Scaling(spec.scaling))
        result = empirical_trip_probe(op, point.r, spec.trials, run.seed)
        row = self.base_row(run)
        row["delta_hat"] = result.delta_hat
        return RunOutcome(row=row)
