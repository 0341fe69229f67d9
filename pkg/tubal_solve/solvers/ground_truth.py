"""
Synthetic symmetric PSD ground truth and its measurements.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra import SpectrumSummary, Tensor3, spectrum, tprod, tsvd
from ..sensing import NoiseSpec, SensingOperator, sample_noise
from ..seeding import stream


@dataclass(frozen=True)
class GroundTruth:
    """X_star = X_factor * X_factor^T with unit Frobenius norm.

    ``V_X`` holds the leading r tensor columns of the t-SVD of X_star and
    ``V_X_perp`` the remaining n - r.
    """

    X_factor: Tensor3
    X_star: Tensor3
    r: int
    spectrum: SpectrumSummary
    V_X: Tensor3
    V_X_perp: Optional[Tensor3]

    @property
    def n(self) -> int:
        return self.X_star.n1

    @property
    def k(self) -> int:
        return self.X_star.k

    @property
    def condition_number(self) -> float:
        return self.spectrum.condition_number

    @classmethod
    def from_factor(cls, X_factor: Tensor3, normalize: bool = True) -> "GroundTruth":
        product = tprod(X_factor, X_factor.T)
        if normalize:
            X_factor = X_factor / np.sqrt(product.frobenius())
            product = tprod(X_factor, X_factor.T)
        n, r, _ = X_factor.shape
        V = tsvd(product).V
        return cls(
            X_factor=X_factor,
            X_star=product,
            r=r,
            spectrum=spectrum(product),
            V_X=V.columns(0, r),
            V_X_perp=V.columns(r, n) if r < n else None,
        )


def make_ground_truth(n: int, r: int, k: int, seed: int) -> GroundTruth:
    """Gaussian N(0, 1) factor of shape (n, r, k), normalized so ||X_star||_F = 1."""
    if not 1 <= r <= n:
        raise ValueError(f"tubal rank must satisfy 1 <= r <= n, got r={r}, n={n}")
    rng = stream(seed, "truth")
    return GroundTruth.from_factor(Tensor3(rng.standard_normal((n, r, k))))


def make_measurements(
    truth: Tensor3, op: SensingOperator, noise: Optional[NoiseSpec] = None
) -> tuple[np.ndarray, np.ndarray]:
    """y = M(X_star) + s; returns (y, s)."""
    clean = op.forward(truth)
    s = sample_noise(noise, op.m) if noise is not None else np.zeros(op.m)
    return clean + s, s
