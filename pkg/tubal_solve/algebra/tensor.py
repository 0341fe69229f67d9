"""
Value types of the t-product algebra.
"""

from dataclasses import dataclass
from numbers import Real

import numpy as np
from scipy.linalg import block_diag

from ..errors import NonFiniteError, ShapeError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Tensor3:
    """Real third-order tensor of shape (n1, n2, k).

    Instances are immutable. ``a @ b`` is the t-product and ``a.T`` the
    t-transpose; ``+``, ``-`` and scalar ``*`` act entrywise.
    """

    data: np.ndarray

    def __post_init__(self):
        array = np.asarray(self.data, dtype=np.float64)
        if array.ndim == 2:
            array = array[:, :, np.newaxis]
        if array.ndim != 3 or min(array.shape) < 1:
            raise ShapeError(f"expected a nonempty (n1, n2, k) array, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise NonFiniteError("tensor entries must be finite")
        object.__setattr__(self, "data", _frozen(array))

    @classmethod
    def zeros(cls, n1: int, n2: int, k: int) -> "Tensor3":
        return cls(np.zeros((n1, n2, k)))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    @property
    def n1(self) -> int:
        return self.data.shape[0]

    @property
    def n2(self) -> int:
        return self.data.shape[1]

    @property
    def k(self) -> int:
        return self.data.shape[2]

    @property
    def T(self) -> "Tensor3":
        from .products import ttranspose

        return ttranspose(self)

    def frontal(self, index: int) -> np.ndarray:
        return self.data[:, :, index]

    def columns(self, start: int, stop: int) -> "Tensor3":
        """Lateral slices ``start:stop`` (tensor columns)."""
        return Tensor3(self.data[:, start:stop, :])

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.data))

    def _check_same_shape(self, other: "Tensor3") -> None:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "Tensor3") -> "Tensor3":
        self._check_same_shape(other)
        return Tensor3(self.data + other.data)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        self._check_same_shape(other)
        return Tensor3(self.data - other.data)

    def __neg__(self) -> "Tensor3":
        return Tensor3(-self.data)

    def __mul__(self, scalar: Real) -> "Tensor3":
        if not isinstance(scalar, (Real, np.floating, np.integer)):
            return NotImplemented
        return Tensor3(self.data * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Real) -> "Tensor3":
        return Tensor3(self.data / float(scalar))

    def __matmul__(self, other: "Tensor3") -> "Tensor3":
        from .products import tprod

        return tprod(self, other)

    def __repr__(self) -> str:
        return f"Tensor3(shape={self.shape}, fro={self.frobenius():.4g})"


@dataclass(frozen=True, eq=False)
class FourierSlices:
    """Complex frontal slices after the mode-3 DFT, stored as (n1, n2, k)."""

    slices: np.ndarray

    def __post_init__(self):
        array = np.asarray(self.slices, dtype=np.complex128)
        if array.ndim != 3:
            raise ShapeError(f"expected a (n1, n2, k) spectrum, got shape {array.shape}")
        object.__setattr__(self, "slices", _frozen(array))

    @property
    def k(self) -> int:
        return self.slices.shape[2]

    def __len__(self) -> int:
        return self.k

    def __getitem__(self, index: int) -> np.ndarray:
        return self.slices[:, :, index]

    def bdiag(self) -> np.ndarray:
        """Block-diagonal matrix of all Fourier slices."""
        return block_diag(*(self.slices[:, :, j] for j in range(self.k)))


def identity_tensor(n: int, k: int) -> Tensor3:
    """Identity under the t-product: first frontal slice I, the rest zero."""
    data = np.zeros((n, n, k))
    data[:, :, 0] = np.eye(n)
    return Tensor3(data)
