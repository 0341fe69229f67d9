"""
Factorized gradient descent solvers: sensing recovery, early stopping and completion.
"""

from .ground_truth import GroundTruth, make_ground_truth, make_measurements
from .metrics import PSNR_CAP, minimax_floor, psnr, relative_error, relative_squared_error
from .trace import TRACE_COLUMNS, SolveTrace, TraceRecord
from .diagnostics import ErrorDecomposition, PhaseDiagnostics, error_decomposition, phase_diagnostics
from .fgd import (
    InitScheme,
    SolveResult,
    SolverConfig,
    fgd_step,
    init_large,
    init_small,
    init_spectral,
    initialize,
    solve,
    train_loss,
)
from .earlystop import (
    EarlyStopMonitor,
    EarlyStopResult,
    SplitPlan,
    run_with_early_stopping,
    split,
    validation_loss,
    validation_size_sufficient,
)
from .completion import (
    CompletionConfig,
    CompletionResult,
    CompletionTrace,
    FactorPair,
    MaskedObservation,
    balance_drift,
    complete,
    completion_loss,
    completion_step,
    init_factors,
    make_low_rank,
    make_mask,
    observe,
    split_observation,
)

__all__ = [
    "GroundTruth",
    "make_ground_truth",
    "make_measurements",
    "PSNR_CAP",
    "minimax_floor",
    "psnr",
    "relative_error",
    "relative_squared_error",
    "TRACE_COLUMNS",
    "SolveTrace",
    "TraceRecord",
    "ErrorDecomposition",
    "PhaseDiagnostics",
    "error_decomposition",
    "phase_diagnostics",
    "InitScheme",
    "SolveResult",
    "SolverConfig",
    "fgd_step",
    "init_large",
    "init_small",
    "init_spectral",
    "initialize",
    "solve",
    "train_loss",
    "EarlyStopMonitor",
    "EarlyStopResult",
    "SplitPlan",
    "run_with_early_stopping",
    "split",
    "validation_loss",
    "validation_size_sufficient",
    "CompletionConfig",
    "CompletionResult",
    "CompletionTrace",
    "FactorPair",
    "MaskedObservation",
    "balance_drift",
    "complete",
    "completion_loss",
    "completion_step",
    "init_factors",
    "make_low_rank",
    "make_mask",
    "observe",
    "split_observation",
]
