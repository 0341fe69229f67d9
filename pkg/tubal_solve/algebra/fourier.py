"""
Mode-3 discrete Fourier transforms.

Forward transforms are unnormalized and inverse transforms carry 1/k, the
convention under which ||T||_F = sqrt(1/k) * ||bdiag(fft(T))||_F.

Real tensors have conjugate-symmetric spectra, so most kernels only touch
the first k // 2 + 1 slices (``half_spectrum``) and rebuild the rest by
mirroring (``from_half_spectrum``). The half spectrum is laid out as
(h, n1, n2) so that batched ``np.matmul`` and ``np.linalg.svd`` apply.
"""

import numpy as np
from scipy import fft as sp_fft

from ..errors import NonRealSpectrumError
from .tensor import FourierSlices, Tensor3

IMAG_TOLERANCE = 1e-10


def fft_mode3(t: Tensor3) -> FourierSlices:
    return FourierSlices(sp_fft.fft(t.data, axis=2))


def _symmetry_residual(slices: np.ndarray) -> float:
    k = slices.shape[2]
    mirrored = np.conj(slices[:, :, (-np.arange(k)) % k])
    return float(np.max(np.abs(slices - mirrored), initial=0.0))


def ifft_mode3(f: FourierSlices) -> Tensor3:
    slices = f.slices
    scale = float(np.max(np.abs(slices), initial=0.0))
    if scale == 0.0:
        return Tensor3(np.zeros(slices.shape))
    residual = _symmetry_residual(slices)
    if residual > IMAG_TOLERANCE * scale:
        raise NonRealSpectrumError(
            f"spectrum is not conjugate symmetric (residual {residual:.3e}, scale {scale:.3e})"
        )
    values = sp_fft.ifft(slices, axis=2)
    magnitude = float(np.max(np.abs(values.real), initial=0.0))
    imaginary = float(np.max(np.abs(values.imag), initial=0.0))
    if imaginary > IMAG_TOLERANCE * max(magnitude, np.finfo(float).tiny):
        raise NonRealSpectrumError(f"imaginary residue {imaginary:.3e} after inverse transform")
    return Tensor3(values.real)


def half_spectrum(t: Tensor3) -> np.ndarray:
    """Slices 1..ceil((k+1)/2) of the spectrum, shape (h, n1, n2)."""
    return np.moveaxis(sp_fft.rfft(t.data, axis=2), 2, 0)


def from_half_spectrum(half: np.ndarray, k: int) -> Tensor3:
    """Inverse of ``half_spectrum``: mirror the conjugate half and transform back."""
    return Tensor3(sp_fft.irfft(np.moveaxis(half, 0, 2), n=k, axis=2))


def real_slice_indices(k: int) -> list[int]:
    """Half-spectrum indices whose slices are real for a real tensor."""
    return [0, k // 2] if k % 2 == 0 and k > 1 else [0]


def full_index(k: int) -> np.ndarray:
    """Map every frequency 0..k-1 onto its half-spectrum slice."""
    j = np.arange(k)
    return np.minimum(j, k - j) if k > 1 else j
