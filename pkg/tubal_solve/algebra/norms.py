"""
Spectral, Frobenius and tubal nuclear norms.
"""

from dataclasses import dataclass

import numpy as np

from .decomposition import half_svd
from .fourier import full_index
from .tensor import Tensor3


@dataclass(frozen=True)
class TensorNorms:
    spectral: float
    frobenius: float
    tubal_nuclear: float


def spectral_norm(t: Tensor3) -> float:
    """||T|| = ||bcirc(T)||, the largest singular value over all Fourier slices."""
    return float(half_svd(t, compute_uv=False).max(initial=0.0))


def norms(t: Tensor3) -> TensorNorms:
    s = half_svd(t, compute_uv=False)[full_index(t.k)]
    return TensorNorms(
        spectral=float(s.max(initial=0.0)),
        frobenius=t.frobenius(),
        tubal_nuclear=float(s.sum()),
    )
