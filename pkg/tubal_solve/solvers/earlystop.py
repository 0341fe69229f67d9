"""
Validation-based early stopping.

The measurements are split once into a training and a validation part. FGD
only ever sees the training operator; the validation operator is read by
``validation_loss`` alone, and the iterate with the smallest validation
loss is kept (ties go to the earliest iteration).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..algebra import Tensor3, tprod
from ..errors import ConfigError
from ..sensing import SensingOperator
from ..seeding import stream
from .fgd import SolverConfig, initialize, solve
from .ground_truth import GroundTruth
from .metrics import relative_squared_error
from .trace import SolveTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitPlan:
    train_indices: np.ndarray
    val_indices: np.ndarray
    val_frac: float
    seed: int

    @property
    def m_train(self) -> int:
        return int(self.train_indices.size)

    @property
    def m_val(self) -> int:
        return int(self.val_indices.size)


@dataclass
class EarlyStopResult:
    t_check: int
    val_loss_curve: np.ndarray
    chosen_estimate: Tensor3
    curve_start: int = 0
    rse_at_t_check: Optional[float] = None
    t_best: Optional[int] = None
    rse_best: Optional[float] = None
    trace: Optional[SolveTrace] = None
    validation_size_sufficient: Optional[bool] = None

    @property
    def val_loss_min(self) -> float:
        return float(self.val_loss_curve.min())

    def val_loss_at(self, t: int) -> float:
        """Validation loss of iteration ``t``; the curve starts at ``curve_start``."""
        return float(self.val_loss_curve[t - self.curve_start])

    def summary_csv(self) -> str:
        rse = "" if self.rse_at_t_check is None else repr(self.rse_at_t_check)
        return f"t_check,val_loss_min,rse_at_t_check\n{self.t_check},{self.val_loss_min!r},{rse}\n"


def split(m: int, val_frac: float, seed: int) -> SplitPlan:
    """Uniformly random partition of range(m) with round(val_frac * m) validation indices."""
    if not 0.0 < val_frac < 1.0:
        raise ConfigError(f"val_frac must lie in (0, 1), got {val_frac}")
    if m < 2:
        raise ConfigError(f"need at least 2 measurements to split, got {m}")
    m_val = int(round(val_frac * m))
    if m_val < 1 or m_val > m - 1:
        raise ConfigError(f"val_frac={val_frac} leaves an empty side for m={m}")
    permutation = stream(seed, "split").permutation(m)
    val = np.sort(permutation[:m_val])
    train = np.sort(permutation[m_val:])
    val.setflags(write=False)
    train.setflags(write=False)
    return SplitPlan(train_indices=train, val_indices=val, val_frac=val_frac, seed=seed)


def validation_loss(
    U: Tensor3, op_val: SensingOperator, y_val: np.ndarray, normalize: bool = True
) -> float:
    """e_t = 1/(4 m_val) ||y_val - M_val(U * U^T)||^2.

    With ``normalize=False`` the 1/m_val factor is dropped; the argmin over t
    is the same either way.
    """
    residual = np.asarray(y_val) - op_val.forward(tprod(U, U.T))
    loss = 0.25 * float(residual @ residual)
    return loss / op_val.gram_scale if normalize else loss


class EarlyStopMonitor:
    """Tracks the argmin of a validation curve and keeps only the best iterate.

    Iterations before ``window_start`` are recorded in ``curve`` but never
    selected; ``window`` holds the part the argmin runs over. A strict ``<``
    keeps the earliest iteration on ties.
    """

    def __init__(self, loss_fn: Callable[[object], float], window_start: int = 0):
        self.loss_fn = loss_fn
        self.window_start = window_start
        self.curve: list[float] = []
        self.best_loss = math.inf
        self.best_iteration = -1
        self.best_state = None

    def __call__(self, iteration: int, state) -> float:
        loss = self.loss_fn(state)
        self.curve.append(loss)
        if iteration >= self.window_start and (self.best_iteration < 0 or loss < self.best_loss):
            self.best_loss = loss
            self.best_iteration = iteration
            self.best_state = state
        return loss

    @property
    def window(self) -> list[float]:
        return self.curve[self.window_start :]


def validation_size_sufficient(m_val: int, r: int, kappa: float, T: int) -> bool:
    """Simplified sufficient condition m_val >= r^2 kappa^8 log T (constants dropped)."""
    return m_val >= r**2 * kappa**8 * math.log(max(T, 2))


def run_with_early_stopping(
    op: SensingOperator,
    y: np.ndarray,
    config: SolverConfig,
    plan: SplitPlan,
    truth: Optional[GroundTruth] = None,
    U0: Optional[Tensor3] = None,
) -> EarlyStopResult:
    """FGD on the training split, stopping at the argmin of the validation loss."""
    y = np.asarray(y, dtype=np.float64)
    op_train = op.restrict(plan.train_indices)
    op_val = op.restrict(plan.val_indices)
    y_train = y[plan.train_indices]
    y_val = y[plan.val_indices]

    if U0 is None:
        U0 = initialize(config, op.n, op.k, op_train, y_train)
    # selection runs over t = 1..T; t = 0 only when no step is taken
    monitor = EarlyStopMonitor(
        lambda U: validation_loss(U, op_val, y_val), window_start=min(1, config.T)
    )
    result = solve(op_train, y_train, config, truth=truth, U0=U0, observer=monitor)

    curve = np.asarray(monitor.window, dtype=np.float64)
    t_check = monitor.best_iteration
    estimate = tprod(monitor.best_state, monitor.best_state.T)

    rse_check = rse_best = t_best = sufficient = None
    if truth is not None:
        rse_check = relative_squared_error(estimate, truth.X_star)
        rse_best = result.trace.min_rse()
        t_best = result.trace.argmin_rse()
        sufficient = validation_size_sufficient(
            plan.m_val, truth.r, truth.condition_number, config.T
        )
        logger.debug(
            "early stop t_check=%d rse=%.3e (best %.3e at %s)", t_check, rse_check, rse_best, t_best
        )
    curve.setflags(write=False)
    return EarlyStopResult(
        t_check=t_check,
        val_loss_curve=curve,
        chosen_estimate=estimate,
        curve_start=monitor.window_start,
        rse_at_t_check=rse_check,
        t_best=t_best,
        rse_best=rse_best,
        trace=result.trace,
        validation_size_sufficient=sufficient,
    )
