"""
Dense Gaussian measurement operators and their adjoints.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..algebra import Tensor3
from ..errors import ShapeError
from ..seeding import stream


class Scaling(Enum):
    RAW = "raw"
    INV_SQRT_M = "inv_sqrt_m"


@dataclass(frozen=True, eq=False)
class SensingOperator:
    """m measurement tensors A_i of shape (n, n, k), stored as an (m, n, n, k) stack.

    ``forward(t)_i = <A_i, t>`` and ``adjoint(e) = sum_i e_i A_i``, both
    multiplied by 1/sqrt(m) under ``Scaling.INV_SQRT_M``.
    """

    measurement_tensors: np.ndarray
    seed: int = 0
    scaling: Scaling = Scaling.RAW

    def __post_init__(self):
        stack = np.array(self.measurement_tensors, dtype=np.float64)
        if stack.ndim != 4 or stack.shape[0] < 1 or stack.shape[1] != stack.shape[2]:
            raise ShapeError(f"expected an (m, n, n, k) stack, got shape {stack.shape}")
        stack.setflags(write=False)
        object.__setattr__(self, "measurement_tensors", stack)
        flat = stack.reshape(stack.shape[0], -1)
        object.__setattr__(self, "_flat", flat)

    @property
    def m(self) -> int:
        return self.measurement_tensors.shape[0]

    @property
    def n(self) -> int:
        return self.measurement_tensors.shape[1]

    @property
    def k(self) -> int:
        return self.measurement_tensors.shape[3]

    @property
    def factor(self) -> float:
        return 1.0 if self.scaling is Scaling.RAW else 1.0 / np.sqrt(self.m)

    @property
    def gram_scale(self) -> float:
        """E ||forward(t)||^2 / ||t||_F^2: m for raw operators, 1 when scaled."""
        return self.m * self.factor**2

    def measurement(self, i: int) -> Tensor3:
        return Tensor3(self.measurement_tensors[i])

    def forward(self, t: Tensor3) -> np.ndarray:
        if t.shape != (self.n, self.n, self.k):
            raise ShapeError(f"operator acts on {(self.n, self.n, self.k)}, got {t.shape}")
        return self.factor * (self._flat @ t.data.reshape(-1))

    def adjoint(self, e: np.ndarray) -> Tensor3:
        e = np.asarray(e, dtype=np.float64)
        if e.shape != (self.m,):
            raise ShapeError(f"adjoint expects a vector of length {self.m}, got {e.shape}")
        return Tensor3((self.factor * (e @ self._flat)).reshape(self.n, self.n, self.k))

    def restrict(self, indices: Sequence[int]) -> "SensingOperator":
        """Operator made of the measurements at ``indices``, in that order."""
        return SensingOperator(
            self.measurement_tensors[np.asarray(indices, dtype=np.intp)],
            seed=self.seed,
            scaling=self.scaling,
        )


def make_gaussian_operator(
    n: int, k: int, m: int, seed: int, scaling: Scaling = Scaling.RAW
) -> SensingOperator:
    """Operator with i.i.d. N(0, 1) entries drawn from the ``operator`` stream of ``seed``."""
    if m < 1:
        raise ValueError(f"measurement count must be positive, got {m}")
    rng = stream(seed, "operator")
    return SensingOperator(rng.standard_normal((m, n, n, k)), seed=seed, scaling=scaling)


def make_isometric_operator(n: int, k: int) -> SensingOperator:
    """Exact operator with adjoint(forward(t)) = m t, m = n^2 k.

    A_i = sqrt(m) e_i over the canonical basis, so ||forward(t)||^2 / m = ||t||_F^2.
    """
    m = n * n * k
    stack = np.sqrt(m) * np.eye(m).reshape(m, n, n, k)
    return SensingOperator(stack, seed=0, scaling=Scaling.RAW)
