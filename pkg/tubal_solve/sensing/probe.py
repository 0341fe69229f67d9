"""
Monte-Carlo estimate of the t-RIP constant of a sensing operator.

The returned value is a lower estimate: it only sees the sampled test
tensors, never certifies the isometry over the whole low-rank set.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..algebra import Tensor3, tprod
from ..seeding import stream
from .operator import SensingOperator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TripProbeResult:
    delta_hat: float
    r: int
    trials: int
    deviations: np.ndarray


def random_low_rank(n: int, r: int, k: int, rng: np.random.Generator) -> Tensor3:
    """Unit-Frobenius tensor of tubal rank at most r (product of Gaussian factors)."""
    left = Tensor3(rng.standard_normal((n, r, k)))
    right = Tensor3(rng.standard_normal((n, r, k)))
    product = tprod(left, right.T)
    return product / product.frobenius()


def empirical_trip_probe(op: SensingOperator, r: int, trials: int, seed: int) -> TripProbeResult:
    """max over trials of | ||M(Y)||^2 / m - 1 | for random unit tubal-rank-r Y."""
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if r < 1:
        raise ValueError(f"probe rank must be positive, got {r}")
    rng = stream(seed, "probe")
    normalizer = op.gram_scale
    deviations = np.empty(trials)
    for trial in range(trials):
        y = random_low_rank(op.n, r, op.k, rng)
        energy = float(np.sum(op.forward(y) ** 2))
        deviations[trial] = abs(energy / normalizer - 1.0)
    delta_hat = float(deviations.max())
    logger.debug("t-RIP probe r=%d m=%d trials=%d: delta_hat=%.4f", r, op.m, trials, delta_hat)
    deviations.setflags(write=False)
    return TripProbeResult(delta_hat=delta_hat, r=r, trials=trials, deviations=deviations)
