"""
t-product, t-transpose, inner product and the block-circulant oracle.
"""

import numpy as np

from ..errors import ShapeError
from .fourier import from_half_spectrum, half_spectrum
from .tensor import Tensor3


def tprod(a: Tensor3, b: Tensor3) -> Tensor3:
    """t-product a * b of an (n1, p, k) and a (p, n2, k) tensor.

    Slices 1..ceil((k+1)/2) are multiplied in the Fourier domain and the
    remaining ones follow from conjugate symmetry.
    """
    if a.n2 != b.n1 or a.k != b.k:
        raise ShapeError(f"cannot t-multiply {a.shape} by {b.shape}")
    product = np.matmul(half_spectrum(a), half_spectrum(b))
    return from_half_spectrum(product, a.k)


def ttranspose(t: Tensor3) -> Tensor3:
    """Transpose every frontal slice and reverse the order of slices 2..k."""
    order = (-np.arange(t.k)) % t.k
    return Tensor3(np.transpose(t.data, (1, 0, 2))[:, :, order])


def inner(a: Tensor3, b: Tensor3) -> float:
    """<A, B> = sum over frontal slices of the matrix inner products."""
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.vdot(a.data, b.data))


def unfold(t: Tensor3) -> np.ndarray:
    """Stack the frontal slices vertically into an (n1 k, n2) matrix."""
    return np.concatenate([t.frontal(l) for l in range(t.k)], axis=0)


def fold(matrix: np.ndarray, n1: int, k: int) -> Tensor3:
    if matrix.shape[0] != n1 * k:
        raise ShapeError(f"cannot fold {matrix.shape} into {k} slices of {n1} rows")
    return Tensor3(np.stack([matrix[l * n1:(l + 1) * n1] for l in range(k)], axis=2))


def bcirc_oracle(t: Tensor3) -> np.ndarray:
    """Dense block-circulant matrix; block (i, j) is frontal slice (i - j) mod k.

    Materializes n1 k x n2 k entries, intended for checks on small tensors.
    """
    n1, n2, k = t.shape
    out = np.zeros((n1 * k, n2 * k))
    for i in range(k):
        for j in range(k):
            out[i * n1:(i + 1) * n1, j * n2:(j + 1) * n2] = t.frontal((i - j) % k)
    return out


def tprod_oracle(a: Tensor3, b: Tensor3) -> Tensor3:
    """t-product through fold(bcirc(a) . unfold(b))."""
    if a.n2 != b.n1 or a.k != b.k:
        raise ShapeError(f"cannot t-multiply {a.shape} by {b.shape}")
    return fold(bcirc_oracle(a) @ unfold(b), a.n1, a.k)
