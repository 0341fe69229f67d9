"""
Measurement noise models.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..seeding import stream


class NoiseKind(Enum):
    NONE = "none"
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class NoiseSpec:
    """Noise law and its parameters.

    gaussian: N(0, sigma^2); laplace: location ``mu``, scale ``b`` (variance
    2 b^2); exponential: rate ``lam`` (mean 1 / lam, variance 1 / lam^2).
    """

    kind: NoiseKind = NoiseKind.NONE
    sigma: float = 0.0
    mu: float = 0.0
    b: float = 0.0
    lam: float = 1.0
    seed: int = 0

    @classmethod
    def gaussian(cls, sigma: float, seed: int = 0) -> "NoiseSpec":
        return cls(kind=NoiseKind.GAUSSIAN, sigma=sigma, seed=seed)

    @classmethod
    def laplace(cls, b: float, mu: float = 0.0, seed: int = 0) -> "NoiseSpec":
        return cls(kind=NoiseKind.LAPLACE, mu=mu, b=b, seed=seed)

    @classmethod
    def exponential(cls, lam: float, seed: int = 0) -> "NoiseSpec":
        return cls(kind=NoiseKind.EXPONENTIAL, lam=lam, seed=seed)

    @property
    def variance(self) -> float:
        if self.kind is NoiseKind.GAUSSIAN:
            return self.sigma**2
        if self.kind is NoiseKind.LAPLACE:
            return 2.0 * self.b**2
        if self.kind is NoiseKind.EXPONENTIAL:
            return 1.0 / self.lam**2
        return 0.0

    def validate(self) -> None:
        if self.kind is NoiseKind.GAUSSIAN and self.sigma <= 0:
            raise ValueError(f"gaussian noise needs sigma > 0, got {self.sigma}")
        if self.kind is NoiseKind.LAPLACE and self.b <= 0:
            raise ValueError(f"laplace noise needs b > 0, got {self.b}")
        if self.kind is NoiseKind.EXPONENTIAL and self.lam <= 0:
            raise ValueError(f"exponential noise needs lambda > 0, got {self.lam}")


def sample_noise(spec: NoiseSpec, m: int) -> np.ndarray:
    if m < 1:
        raise ValueError(f"noise length must be positive, got {m}")
    spec.validate()
    if spec.kind is NoiseKind.NONE:
        return np.zeros(m)
    rng = stream(spec.seed, "noise")
    if spec.kind is NoiseKind.GAUSSIAN:
        return rng.normal(0.0, spec.sigma, size=m)
    if spec.kind is NoiseKind.LAPLACE:
        return rng.laplace(spec.mu, spec.b, size=m)
    return rng.exponential(1.0 / spec.lam, size=m)
