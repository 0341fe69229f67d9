"""
Recovery error metrics and the minimax reference floor.
"""

import math

import numpy as np

from ..algebra import Tensor3
from ..errors import DegenerateTensorError, ShapeError

PSNR_CAP = 999.0


def _check(estimate: Tensor3, truth: Tensor3) -> float:
    if estimate.shape != truth.shape:
        raise ShapeError(f"shape mismatch: {estimate.shape} vs {truth.shape}")
    scale = truth.frobenius()
    if scale == 0.0:
        raise DegenerateTensorError("error relative to a zero tensor is undefined")
    return scale


def relative_squared_error(estimate: Tensor3, truth: Tensor3) -> float:
    """RSE = ||estimate - truth||_F^2 / ||truth||_F^2."""
    scale = _check(estimate, truth)
    return float(np.sum((estimate.data - truth.data) ** 2)) / scale**2


def relative_error(estimate: Tensor3, truth: Tensor3) -> float:
    scale = _check(estimate, truth)
    return float(np.linalg.norm(estimate.data - truth.data)) / scale


def psnr(estimate: Tensor3, truth: Tensor3) -> float:
    """10 log10(max|truth|^2 / MSE); an exact match reports ``PSNR_CAP``."""
    _check(estimate, truth)
    mse = float(np.mean((estimate.data - truth.data) ** 2))
    peak = float(np.max(np.abs(truth.data)))
    if mse == 0.0:
        return PSNR_CAP
    return min(PSNR_CAP, 10.0 * math.log10(peak**2 / mse))


def minimax_floor(n: int, r: int, k: int, sigma: float, m: int, delta: float = 0.0) -> float:
    """Information-theoretic lower bound n r k sigma^2 / ((1 + delta) m)."""
    if min(n, r, k, m) <= 0 or sigma < 0 or delta < 0:
        raise ValueError("minimax floor needs positive sizes and nonnegative sigma, delta")
    return n * r * k * sigma**2 / ((1.0 + delta) * m)
