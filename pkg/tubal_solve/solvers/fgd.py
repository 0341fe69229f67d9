"""
Factorized gradient descent for the symmetric PSD sensing model

    min_U  1/(4m) || y - M(U * U^T) ||^2,    U in R^{n x R x k}.

The update applies the raw adjoint exactly as written,
U <- U - (eta/m) M^*(M(U * U^T) - y) * U, unless ``symmetrize_gradient``
replaces M^*(.) by its symmetric part (the exact gradient of the loss).
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from ..algebra import Tensor3, from_half_spectrum, half_spectrum, tprod
from ..algebra.fourier import real_slice_indices
from ..errors import ConfigError, DivergenceError, NonFiniteError
from ..sensing import SensingOperator
from ..seeding import stream
from .diagnostics import phase_diagnostics
from .ground_truth import GroundTruth
from .metrics import relative_squared_error
from .trace import SolveTrace, TraceRecord

logger = logging.getLogger(__name__)

LOG_EVERY = 500


class InitScheme(Enum):
    SMALL = "small"
    SPECTRAL = "spectral"
    LARGE = "large"


DEFAULT_ALPHA = {InitScheme.SMALL: 1e-10, InitScheme.LARGE: 10.0, InitScheme.SPECTRAL: 0.0}


@dataclass(frozen=True)
class SolverConfig:
    R: int
    eta: float = 0.1
    T: int = 5000
    init: InitScheme = InitScheme.SMALL
    alpha: Optional[float] = None
    divergence_guard: float = 1e6
    seed: int = 0
    symmetrize_gradient: bool = False
    diag_stride: int = 1

    @property
    def init_scale(self) -> float:
        return DEFAULT_ALPHA[self.init] if self.alpha is None else self.alpha

    def validate(self, n: Optional[int] = None) -> None:
        if self.R < 1 or (n is not None and self.R > n):
            raise ConfigError(f"over-specified rank must satisfy 1 <= R <= n, got R={self.R}")
        if self.eta < 0:
            raise ConfigError(f"step size must be nonnegative, got {self.eta}")
        if self.T < 0:
            raise ConfigError(f"iteration count must be nonnegative, got {self.T}")
        if self.init is not InitScheme.SPECTRAL and self.init_scale <= 0:
            raise ConfigError(f"initialization scale must be positive, got {self.init_scale}")
        if self.divergence_guard <= 1:
            raise ConfigError(f"divergence guard must exceed 1, got {self.divergence_guard}")
        if self.diag_stride < 0:
            raise ConfigError(f"diagnostics stride must be nonnegative, got {self.diag_stride}")

    @classmethod
    def large(cls, R: int, **kwargs) -> "SolverConfig":
        """Large random initialization, paired with a small step to avoid divergence."""
        kwargs.setdefault("eta", 1e-3)
        return cls(R=R, init=InitScheme.LARGE, **kwargs)


@dataclass
class SolveResult:
    trace: SolveTrace
    U: Tensor3

    @property
    def estimate(self) -> Tensor3:
        return tprod(self.U, self.U.T)


# (iteration, iterate) -> validation loss or None
IterationObserver = Callable[[int, Tensor3], Optional[float]]


def init_small(n: int, R: int, k: int, alpha: float, seed: int) -> Tensor3:
    """i.i.d. N(0, alpha^2 / R) entries from the ``init`` stream of ``seed``."""
    if alpha <= 0:
        raise ValueError(f"initialization scale must be positive, got {alpha}")
    rng = stream(seed, "init")
    return Tensor3(rng.normal(0.0, alpha / np.sqrt(R), size=(n, R, k)))


def init_large(n: int, R: int, k: int, seed: int, alpha: float = 10.0) -> Tensor3:
    return init_small(n, R, k, alpha, seed)


def _psd_factor(M: Tensor3, R: int) -> Tensor3:
    """Square-root factor of the top-R part of a symmetric tensor.

    Each Hermitian Fourier slice is eigendecomposed; the R largest eigenvalues
    are clipped at 0 and U_j = Q_j[:, :R] diag(sqrt(lambda_+)).
    """
    half = half_spectrum(M)
    half = 0.5 * (half + np.conj(np.swapaxes(half, 1, 2)))
    eigenvalues, eigenvectors = np.linalg.eigh(half)
    for j in real_slice_indices(M.k):
        eigenvalues[j], eigenvectors[j] = np.linalg.eigh(half[j].real)
    top_values = np.clip(eigenvalues[:, ::-1][:, :R], 0.0, None)
    top_vectors = eigenvectors[:, :, ::-1][:, :, :R]
    return from_half_spectrum(top_vectors * np.sqrt(top_values)[:, np.newaxis, :], M.k)


def init_spectral(op: SensingOperator, y: np.ndarray, R: int, seed: int = 0) -> Tensor3:
    """Spectral start from the symmetrized back-projection (1/m) M^*(y).

    ``seed`` is accepted for interface symmetry; the construction is deterministic.
    """
    if not 1 <= R <= op.n:
        raise ConfigError(f"spectral initialization needs 1 <= R <= n, got R={R}, n={op.n}")
    Z = op.adjoint(y) / op.gram_scale
    return _psd_factor(0.5 * (Z + Z.T), R)


def initialize(
    config: SolverConfig, n: int, k: int, op: Optional[SensingOperator] = None, y=None
) -> Tensor3:
    if config.init is InitScheme.SPECTRAL:
        if op is None or y is None:
            raise ConfigError("spectral initialization needs the operator and measurements")
        return init_spectral(op, y, config.R, config.seed)
    return init_small(n, config.R, k, config.init_scale, config.seed)


def train_loss(U: Tensor3, op: SensingOperator, y: np.ndarray) -> float:
    residual = op.forward(tprod(U, U.T)) - y
    return float(residual @ residual) / (4.0 * op.gram_scale)


def _descend(
    U: Tensor3, op: SensingOperator, residual: np.ndarray, eta: float, symmetrize: bool
) -> Tensor3:
    try:
        G = op.adjoint(residual)
        if symmetrize:
            G = 0.5 * (G + G.T)
        step = tprod(G, U)
        updated = U.data - (eta / op.gram_scale) * step.data
        return Tensor3(updated)
    except (NonFiniteError, FloatingPointError) as exc:
        raise DivergenceError("non-finite values in the FGD update") from exc


def fgd_step(
    U: Tensor3, op: SensingOperator, y: np.ndarray, eta: float, symmetrize_gradient: bool = False
) -> Tensor3:
    """One update U - (eta/m) M^*(M(U * U^T) - y) * U."""
    residual = op.forward(tprod(U, U.T)) - y
    return _descend(U, op, residual, eta, symmetrize_gradient)


def solve(
    op: SensingOperator,
    y: np.ndarray,
    config: SolverConfig,
    truth: Optional[GroundTruth] = None,
    U0: Optional[Tensor3] = None,
    observer: Optional[IterationObserver] = None,
) -> SolveResult:
    """Run T FGD iterations and record t = 0..T.

    Records carry the train loss, and with ``truth`` the RSE and (every
    ``diag_stride`` iterations) the phase diagnostics. ``observer`` is called
    with every iterate and its return value is stored as ``val_loss``.
    """
    config.validate(op.n)
    y = np.asarray(y, dtype=np.float64)
    U = U0 if U0 is not None else initialize(config, op.n, op.k, op, y)
    trace = SolveTrace()
    initial_loss = None

    for t in range(config.T + 1):
        started = time.perf_counter()
        try:
            estimate = tprod(U, U.T)
        except NonFiniteError as exc:
            raise DivergenceError(f"iterate overflowed at iteration {t}", t, trace) from exc
        residual = op.forward(estimate) - y
        loss = float(residual @ residual) / (4.0 * op.gram_scale)
        if not np.isfinite(loss):
            raise DivergenceError(f"non-finite training loss at iteration {t}", t, trace)
        if initial_loss is None:
            initial_loss = loss
        elif initial_loss > 0 and loss > config.divergence_guard * initial_loss:
            raise DivergenceError(
                f"training loss {loss:.3e} exceeded {config.divergence_guard:g} x initial "
                f"loss {initial_loss:.3e} at iteration {t}",
                t,
                trace,
            )

        record = TraceRecord(iter=t, train_loss=loss)
        if truth is not None:
            record.rse = relative_squared_error(estimate, truth.X_star)
            stride = config.diag_stride
            if stride > 0 and (t % stride == 0 or t == config.T):
                diagnostics = phase_diagnostics(U, truth)
                record.sigma_min_signal = diagnostics.sigma_min_signal
                record.overparam_norm = diagnostics.overparam_norm
                record.misalignment = diagnostics.misalignment
        if observer is not None:
            record.val_loss = observer(t, U)

        if t < config.T:
            try:
                U = _descend(U, op, residual, config.eta, config.symmetrize_gradient)
            except DivergenceError as exc:
                exc.iteration, exc.trace = t, trace
                raise
        record.elapsed_ms = 1000.0 * (time.perf_counter() - started)
        trace.append(record)

        if t % LOG_EVERY == 0:
            logger.debug("iter %d train_loss %.3e rse %s", t, loss, record.rse)

    return SolveResult(trace=trace, U=U)
