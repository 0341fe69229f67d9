"""
Synthetic problem instances rebuilt from a grid point and its derived seed.
"""

from dataclasses import dataclass

import numpy as np

from ..config import ExperimentSpec, GridPoint
from ..sensing import NoiseSpec, Scaling, SensingOperator, make_gaussian_operator
from ..solvers import GroundTruth, InitScheme, SolverConfig, make_ground_truth, make_measurements


def noise_spec(kind: str, sigma: float, seed: int) -> NoiseSpec:
    """``sigma`` is the standard deviation, the Laplace scale b or the exponential 1/lambda."""
    if kind == "none" or sigma == 0.0:
        return NoiseSpec(seed=seed)
    if kind == "gaussian":
        return NoiseSpec.gaussian(sigma, seed=seed)
    if kind == "laplace":
        return NoiseSpec.laplace(sigma, seed=seed)
    return NoiseSpec.exponential(1.0 / sigma, seed=seed)


@dataclass
class SensingInstance:
    truth: GroundTruth
    op: SensingOperator
    y: np.ndarray
    noise: np.ndarray


def sensing_instance(spec: ExperimentSpec, point: GridPoint, seed: int) -> SensingInstance:
    truth = make_ground_truth(point.n, point.r, point.k, seed)
    op = make_gaussian_operator(point.n, point.k, point.m, seed, Scaling(spec.scaling))
    y, noise = make_measurements(truth.X_star, op, noise_spec(point.noise, point.sigma, seed))
    return SensingInstance(truth=truth, op=op, y=y, noise=noise)


def solver_config(spec: ExperimentSpec, point: GridPoint, seed: int) -> SolverConfig:
    return SolverConfig(
        R=point.R,
        eta=point.eta,
        T=point.T,
        init=InitScheme(point.init),
        alpha=point.alpha,
        divergence_guard=spec.divergence_guard,
        seed=seed,
        symmetrize_gradient=spec.symmetrize_gradient,
        diag_stride=spec.diag_stride,
    )
