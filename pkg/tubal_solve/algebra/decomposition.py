"""
t-SVD, tubal rank and spectrum summaries.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateTensorError
from .fourier import from_half_spectrum, full_index, half_spectrum, real_slice_indices
from .products import tprod
from .tensor import Tensor3, identity_tensor

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class TSVD:
    V: Tensor3
    S: Tensor3
    W: Tensor3

    def reconstruct(self) -> Tensor3:
        return tprod(tprod(self.V, self.S), self.W.T)


@dataclass(frozen=True, eq=False)
class SpectrumSummary:
    tubal_rank: int
    singular_values: np.ndarray  # (k, min(n1, n2)), row j is Fourier slice j
    sigma_min_pos: float
    sigma_max: float
    condition_number: float


def half_svd(t: Tensor3, compute_uv: bool = True):
    """SVD of every half-spectrum slice, shapes (h, n1, n1), (h, q), (h, n2, n2).

    Slices that are real for a real tensor are decomposed in real arithmetic so
    that the mirrored factors transform back to real tensors.
    """
    half = half_spectrum(t)
    real_slices = real_slice_indices(t.k)
    if not compute_uv:
        s = np.linalg.svd(half, compute_uv=False)
        for j in real_slices:
            s[j] = np.linalg.svd(half[j].real, compute_uv=False)
        return s
    P, s, Qh = np.linalg.svd(half, full_matrices=True)
    for j in real_slices:
        P[j], s[j], Qh[j] = np.linalg.svd(half[j].real, full_matrices=True)
    return P, s, Qh


def singular_values(t: Tensor3) -> np.ndarray:
    """Fourier-slice singular values for all k slices, shape (k, min(n1, n2))."""
    return half_svd(t, compute_uv=False)[full_index(t.k)]


def tsvd(t: Tensor3) -> TSVD:
    n1, n2, k = t.shape
    P, s, Qh = half_svd(t)
    sigma = np.zeros((s.shape[0], n1, n2), dtype=np.complex128)
    q = min(n1, n2)
    sigma[:, np.arange(q), np.arange(q)] = s
    Q = np.conj(np.swapaxes(Qh, 1, 2))
    return TSVD(
        V=from_half_spectrum(P, k),
        S=from_half_spectrum(sigma, k),
        W=from_half_spectrum(Q, k),
    )


def truncate(decomposition: TSVD, r: int) -> Tensor3:
    """Keep the leading r diagonal tubes of S."""
    V, S, W = decomposition.V, decomposition.S, decomposition.W
    if r <= 0:
        return Tensor3.zeros(V.n1, W.n1, V.k)
    head = Tensor3(S.data[:r, :r, :])
    return tprod(tprod(V.columns(0, r), head), W.columns(0, r).T)


def best_rank_approximation(t: Tensor3, r: int) -> Tensor3:
    return truncate(tsvd(t), r)


def tube_norms(t: Tensor3) -> np.ndarray:
    """Frobenius norms of the diagonal tubes S(i, i, :) of the t-SVD."""
    s = singular_values(t)
    scale = float(s.max(initial=0.0))
    if scale == 0.0:
        return np.zeros(s.shape[1])
    # rescaled so tiny tensors do not underflow when squared
    return scale * np.linalg.norm(s / scale, axis=0) / np.sqrt(t.k)


def tubal_rank(t: Tensor3, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    norms = tube_norms(t)
    largest = float(norms.max(initial=0.0))
    if largest == 0.0:
        return 0
    return int(np.count_nonzero(norms > rel_tol * largest))


def spectrum(t: Tensor3, rel_tol: float = DEFAULT_RANK_TOL) -> SpectrumSummary:
    s = singular_values(t)
    sigma_max = float(s.max(initial=0.0))
    if sigma_max == 0.0:
        raise DegenerateTensorError("spectrum of the zero tensor is undefined")
    positive = s[s > rel_tol * sigma_max]
    sigma_min_pos = float(positive.min())
    s.setflags(write=False)
    return SpectrumSummary(
        tubal_rank=tubal_rank(t, rel_tol),
        singular_values=s,
        sigma_min_pos=sigma_min_pos,
        sigma_max=sigma_max,
        condition_number=sigma_max / sigma_min_pos,
    )


def orthonormal_columns(t: Tensor3, tol: float = 1e-9) -> bool:
    """True when t^T * t equals the identity tensor within ``tol`` (Frobenius)."""
    if t.n2 > t.n1:
        return False
    gram = tprod(t.T, t)
    residual = np.linalg.norm(gram.data - identity_tensor(t.n2, t.k).data)
    logger.debug("orthonormality residual %.3e for %s", residual, t.shape)
    return bool(residual <= tol)
