"""
Signal / over-parameterization split of an FGD iterate.

With V_X^T * U_t = V_t * S_t * W_t^T, the iterate separates into the signal
term U_t * W_t and the over-parameterization term U_t * W_{t,perp}. All
quantities are spectral norms or smallest singular values over the Fourier
slices, so they are computed on the half spectrum directly.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..algebra import Tensor3, half_spectrum, spectral_norm, tprod
from ..algebra.fourier import real_slice_indices
from .ground_truth import GroundTruth

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-10
BOUND_SLACK = 1e-10


@dataclass(frozen=True)
class PhaseDiagnostics:
    sigma_min_signal: float
    overparam_norm: float
    misalignment: float
    degenerate: bool = False


@dataclass(frozen=True)
class ErrorDecomposition:
    in_subspace: float
    in_subspace_fro: float
    overparam: float
    total: float
    bound_holds: bool


def _hermitian(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def _slice_svd(half: np.ndarray, k: int, full_matrices: bool):
    P, s, Qh = np.linalg.svd(half, full_matrices=full_matrices)
    for j in real_slice_indices(k):
        P[j], s[j], Qh[j] = np.linalg.svd(half[j].real, full_matrices=full_matrices)
    return P, s, Qh


def _max_spectral(blocks: np.ndarray) -> float:
    if blocks.size == 0:
        return 0.0
    return float(np.linalg.svd(blocks, compute_uv=False).max(initial=0.0))


def _signal_split(U: Tensor3, gt: GroundTruth):
    """Half-spectrum U, W_t, W_{t,perp} and the singular values of V_X^T * U."""
    Uh = half_spectrum(U)
    projected = np.matmul(_hermitian(half_spectrum(gt.V_X)), Uh)
    _, s, Qh = _slice_svd(projected, U.k, full_matrices=True)
    Q = _hermitian(Qh)
    r = min(gt.r, U.n2)
    return Uh, Q[:, :, :r], Q[:, :, r:], s


def phase_diagnostics(U: Tensor3, gt: GroundTruth) -> PhaseDiagnostics:
    """sigma_min(U*W), ||U*W_perp|| and ||V_Xperp^T * V_{U*W}|| for one iterate."""
    Uh, W, W_perp, s = _signal_split(U, gt)
    overparam = _max_spectral(np.matmul(Uh, W_perp))
    scale = _max_spectral(Uh)
    smallest = float(s.min()) if s.size else 0.0
    degenerate = scale == 0.0 or smallest <= DEGENERACY_TOL * scale
    if degenerate:
        logger.debug("V_X^T * U is rank deficient; misalignment reported as 1")
        return PhaseDiagnostics(
            sigma_min_signal=0.0,
            overparam_norm=overparam,
            misalignment=1.0,
            degenerate=True,
        )
    signal = np.matmul(Uh, W)
    V_signal, s_signal, _ = _slice_svd(signal, U.k, full_matrices=False)
    if gt.V_X_perp is None:
        misalignment = 0.0
    else:
        V_perp = half_spectrum(gt.V_X_perp)
        misalignment = _max_spectral(np.matmul(_hermitian(V_perp), V_signal))
    return PhaseDiagnostics(
        sigma_min_signal=float(s_signal.min()),
        overparam_norm=overparam,
        misalignment=misalignment,
    )


def error_decomposition(U: Tensor3, gt: GroundTruth) -> ErrorDecomposition:
    """In-subspace error ||V_X^T * (U U^T - X_star)|| and ||U * W_perp||^2.

    ``bound_holds`` reports whether ||U U^T - X_star|| <= 4 in_subspace +
    overparam, which holds once the signal term is aligned with X_star.
    """
    residual = tprod(U, U.T) - gt.X_star
    projected = tprod(gt.V_X.T, residual)
    Uh, _, W_perp, _ = _signal_split(U, gt)
    overparam = _max_spectral(np.matmul(Uh, W_perp)) ** 2
    in_subspace = spectral_norm(projected)
    total = spectral_norm(residual)
    bound_holds = total <= 4.0 * in_subspace + overparam + BOUND_SLACK * max(1.0, total)
    if not bound_holds:
        logger.warning(
            "error bound violated: total %.3e > 4 * %.3e + %.3e", total, in_subspace, overparam
        )
    return ErrorDecomposition(
        in_subspace=in_subspace,
        in_subspace_fro=projected.frobenius(),
        overparam=overparam,
        total=total,
        bound_holds=bool(bound_holds),
    )
