"""
Asymmetric tensor completion L * Rt^T from Bernoulli-masked noisy entries.

Both factors are updated simultaneously from the same pre-step values:

    G    = P_train(L * Rt^T - Y)
    L   <- L  - (eta/p) G * Rt
    Rt  <- Rt - (eta/p) G^T * L

and the iterate with the smallest held-out loss (1/2p) ||P_val(L * Rt^T - Y)||^2
is returned next to the oracle-best one.
"""

import csv
import io
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Union

import numpy as np

from ..algebra import Tensor3, tprod
from ..errors import ConfigError, DivergenceError, NonFiniteError, ShapeError
from ..seeding import stream
from .earlystop import EarlyStopMonitor, EarlyStopResult
from .metrics import psnr, relative_error, relative_squared_error
from .trace import format_value

logger = logging.getLogger(__name__)

COMPLETION_COLUMNS = ("iter", "train_loss", "val_loss", "re", "psnr")
LOG_EVERY = 500


def make_mask(n1: int, n2: int, k: int, p: float, seed: int) -> np.ndarray:
    """i.i.d. Bernoulli(p) observation pattern from the ``mask`` stream."""
    if not 0.0 < p <= 1.0:
        raise ConfigError(f"observation probability must lie in (0, 1], got {p}")
    if p == 1.0:
        mask = np.ones((n1, n2, k), dtype=bool)
    else:
        mask = stream(seed, "mask").random((n1, n2, k)) < p
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True, eq=False)
class MaskedObservation:
    """Entries of X_star + noise on ``mask``; ``observed`` is zero elsewhere."""

    observed: Tensor3
    mask: np.ndarray
    p: float
    seed: int = 0

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if mask.shape != self.observed.shape:
            raise ShapeError(f"mask shape {mask.shape} does not match {self.observed.shape}")
        if not 0.0 < self.p <= 1.0:
            raise ConfigError(f"observation probability must lie in (0, 1], got {self.p}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "observed", Tensor3(np.where(mask, self.observed.data, 0.0)))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.observed.shape

    @property
    def count(self) -> int:
        return int(self.mask.sum())


def observe(truth: Tensor3, p: float, sigma: float = 0.0, seed: int = 0) -> MaskedObservation:
    """Mask ``truth`` with Bernoulli(p) and add N(0, sigma^2) noise on observed entries."""
    if sigma < 0:
        raise ConfigError(f"noise level must be nonnegative, got {sigma}")
    mask = make_mask(*truth.shape, p, seed)
    values = truth.data
    if sigma > 0:
        values = values + sigma * stream(seed, "noise").standard_normal(truth.shape)
    return MaskedObservation(observed=Tensor3(values), mask=mask, p=p, seed=seed)


def split_observation(
    obs: MaskedObservation, val_frac: float, seed: int
) -> tuple[MaskedObservation, MaskedObservation]:
    """Carve a validation set from the observed entries by independent thinning.

    Each observed entry goes to validation with probability ``val_frac``. The
    two halves carry the effective rates p (1 - val_frac) and p val_frac.
    """
    if not 0.0 < val_frac < 1.0:
        raise ConfigError(f"val_frac must lie in (0, 1), got {val_frac}")
    held_out = stream(seed, "split").random(obs.shape) < val_frac
    val_mask = obs.mask & held_out
    train_mask = obs.mask & ~held_out
    if not val_mask.any() or not train_mask.any():
        raise ConfigError(f"val_frac={val_frac} leaves an empty side of {obs.count} entries")
    train = MaskedObservation(obs.observed, train_mask, obs.p * (1.0 - val_frac), seed)
    val = MaskedObservation(obs.observed, val_mask, obs.p * val_frac, seed)
    return train, val


@dataclass(frozen=True)
class FactorPair:
    L: Tensor3
    Rt: Tensor3

    def __post_init__(self):
        if self.L.n2 != self.Rt.n2 or self.L.k != self.Rt.k:
            raise ShapeError(f"factor shapes {self.L.shape} and {self.Rt.shape} do not pair")

    @property
    def rank(self) -> int:
        return self.L.n2

    @property
    def estimate(self) -> Tensor3:
        return tprod(self.L, self.Rt.T)


@dataclass(frozen=True)
class CompletionConfig:
    R: int
    eta: float = 1e-3
    T: int = 2000
    alpha: float = 1e-5
    val_frac: float = 0.05
    seed: int = 0
    divergence_guard: float = 1e6

    def validate(self, n1: Optional[int] = None, n2: Optional[int] = None) -> None:
        limit = min(n1, n2) if n1 is not None and n2 is not None else None
        if self.R < 1 or (limit is not None and self.R > limit):
            raise ConfigError(f"factor rank must satisfy 1 <= R <= min(n1, n2), got R={self.R}")
        if self.eta < 0 or self.T < 0:
            raise ConfigError("step size and iteration count must be nonnegative")
        if self.alpha <= 0:
            raise ConfigError(f"initialization scale must be positive, got {self.alpha}")
        if not 0.0 < self.val_frac < 1.0:
            raise ConfigError(f"val_frac must lie in (0, 1), got {self.val_frac}")
        if self.divergence_guard <= 1:
            raise ConfigError(f"divergence guard must exceed 1, got {self.divergence_guard}")


def init_factors(n1: int, n2: int, R: int, k: int, alpha: float, seed: int) -> FactorPair:
    """Both factors i.i.d. N(0, alpha^2 / R), drawn in order from the ``init`` stream."""
    rng = stream(seed, "init")
    scale = alpha / np.sqrt(R)
    L = Tensor3(rng.normal(0.0, scale, size=(n1, R, k)))
    Rt = Tensor3(rng.normal(0.0, scale, size=(n2, R, k)))
    return FactorPair(L, Rt)


def _masked_residual(fp: FactorPair, obs: MaskedObservation) -> np.ndarray:
    if fp.L.n1 != obs.shape[0] or fp.Rt.n1 != obs.shape[1] or fp.L.k != obs.shape[2]:
        raise ShapeError(f"factors {fp.L.shape}, {fp.Rt.shape} do not fit {obs.shape}")
    return np.where(obs.mask, fp.estimate.data - obs.observed.data, 0.0)


def completion_loss(fp: FactorPair, obs: MaskedObservation) -> float:
    """(1/2p) ||P_Omega(L * Rt^T - Y)||_F^2."""
    residual = _masked_residual(fp, obs)
    return float(np.sum(residual**2)) / (2.0 * obs.p)


def completion_step(fp: FactorPair, obs: MaskedObservation, eta: float) -> FactorPair:
    G = Tensor3(_masked_residual(fp, obs))
    scale = eta / obs.p
    try:
        L = fp.L - scale * tprod(G, fp.Rt)
        Rt = fp.Rt - scale * tprod(G.T, fp.L)
    except (NonFiniteError, FloatingPointError) as exc:
        raise DivergenceError("non-finite values in the completion update") from exc
    return FactorPair(L, Rt)


def balance_drift(fp: FactorPair) -> float:
    """||L^T * L - Rt^T * Rt||_F."""
    return (tprod(fp.L.T, fp.L) - tprod(fp.Rt.T, fp.Rt)).frobenius()


def make_low_rank(n1: int, n2: int, r: int, k: int, seed: int) -> Tensor3:
    """Unit-Frobenius L * R^T with Gaussian factors, from the ``truth`` stream."""
    if not 1 <= r <= min(n1, n2):
        raise ConfigError(f"tubal rank must satisfy 1 <= r <= min(n1, n2), got r={r}")
    rng = stream(seed, "truth")
    left = Tensor3(rng.standard_normal((n1, r, k)))
    right = Tensor3(rng.standard_normal((n2, r, k)))
    product = tprod(left, right.T)
    return product / product.frobenius()


@dataclass
class CompletionRecord:
    iter: int
    train_loss: float
    val_loss: float
    re: Optional[float] = None
    psnr: Optional[float] = None
    balance: Optional[float] = None


@dataclass
class CompletionTrace:
    records: list[CompletionRecord] = field(default_factory=list)

    def append(self, record: CompletionRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CompletionRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> CompletionRecord:
        return self.records[index]

    def column(self, name: str) -> np.ndarray:
        values = [getattr(record, name) for record in self.records]
        return np.array([np.nan if v is None else v for v in values], dtype=float)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(COMPLETION_COLUMNS)
        for record in self.records:
            writer.writerow([format_value(getattr(record, name)) for name in COMPLETION_COLUMNS])
        return buffer.getvalue()

    def write_csv(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")


@dataclass
class CompletionResult(EarlyStopResult):
    """Early-stopped completion; ``re_es``/``psnr_es`` at t_check, ``*_best`` over all t."""

    re_es: Optional[float] = None
    psnr_es: Optional[float] = None
    re_best: Optional[float] = None
    psnr_best: Optional[float] = None
    factors: Optional[FactorPair] = None

    def summary_csv(self, method: str = "fgd", p: float = 0.0, sigma: float = 0.0) -> str:
        values = (method, p, sigma, self.factors.rank if self.factors else "")
        values += (self.re_best, self.re_es, self.psnr_best, self.psnr_es)
        return (
            "method,p,sigma,R,re_best,re_es,psnr_best,psnr_es\n"
            + ",".join(format_value(v) for v in values)
            + "\n"
        )


def complete(
    obs_train: MaskedObservation,
    obs_val: MaskedObservation,
    config: CompletionConfig,
    truth: Optional[Tensor3] = None,
    initial: Optional[FactorPair] = None,
) -> CompletionResult:
    """Completion on the train mask with early stopping on the validation mask."""
    if obs_train.shape != obs_val.shape:
        raise ShapeError(f"train {obs_train.shape} and validation {obs_val.shape} differ")
    if np.any(obs_train.mask & obs_val.mask):
        raise ConfigError("train and validation masks overlap")
    n1, n2, k = obs_train.shape
    config.validate(n1, n2)
    fp = initial or init_factors(n1, n2, config.R, k, config.alpha, config.seed)

    monitor = EarlyStopMonitor(
        lambda pair: completion_loss(pair, obs_val), window_start=min(1, config.T)
    )
    trace = CompletionTrace()
    initial_loss = None
    for t in range(config.T + 1):
        started = time.perf_counter()
        try:
            loss = completion_loss(fp, obs_train)
        except NonFiniteError as exc:
            raise DivergenceError(f"factors overflowed at iteration {t}", t, trace) from exc
        if not np.isfinite(loss):
            raise DivergenceError(f"non-finite completion loss at iteration {t}", t, trace)
        if initial_loss is None:
            initial_loss = loss
        elif initial_loss > 0 and loss > config.divergence_guard * initial_loss:
            raise DivergenceError(
                f"completion loss {loss:.3e} exceeded {config.divergence_guard:g} x initial "
                f"loss {initial_loss:.3e} at iteration {t}",
                t,
                trace,
            )
        record = CompletionRecord(iter=t, train_loss=loss, val_loss=monitor(t, fp))
        if truth is not None:
            estimate = fp.estimate
            record.re = relative_error(estimate, truth)
            record.psnr = psnr(estimate, truth)
            record.balance = balance_drift(fp)
        trace.append(record)

        if t < config.T:
            try:
                fp = completion_step(fp, obs_train, config.eta)
            except DivergenceError as exc:
                exc.iteration, exc.trace = t, trace
                raise
        if t % LOG_EVERY == 0:
            logger.debug(
                "iter %d loss %.3e val %.3e re %s (%.1f ms)",
                t,
                loss,
                record.val_loss,
                record.re,
                1000.0 * (time.perf_counter() - started),
            )

    chosen = monitor.best_state.estimate
    result = CompletionResult(
        t_check=monitor.best_iteration,
        val_loss_curve=np.asarray(monitor.window, dtype=float),
        chosen_estimate=chosen,
        curve_start=monitor.window_start,
        trace=trace,
        factors=fp,
    )
    if truth is not None:
        re_curve = trace.column("re")
        best = int(np.argmin(re_curve))
        result.t_best = trace[best].iter
        result.re_best = float(re_curve[best])
        result.psnr_best = trace[best].psnr
        result.rse_best = result.re_best**2
        result.re_es = relative_error(chosen, truth)
        result.psnr_es = psnr(chosen, truth)
        result.rse_at_t_check = relative_squared_error(chosen, truth)
    result.val_loss_curve.setflags(write=False)
    return result
