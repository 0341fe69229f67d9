"""
Tensor completion runs on synthetic or file-provided data.

The observation comes from a tensor file plus a mask file when both are
configured; otherwise the truth (synthetic or ``truth_file``) is masked and
noised per run. Each run writes its trajectory under ``traces/``.
"""

from pathlib import Path
from typing import Optional

from ..algebra import Tensor3, read_mask, read_tensor
from ..config import ExperimentSpec, RunSpec
from ..errors import FormatError
from ..solvers import (
    CompletionConfig,
    MaskedObservation,
    complete,
    make_low_rank,
    observe,
    split_observation,
)
from .base import Command, RunOutcome


def _read(path: str, reader, what: str):
    try:
        return reader(path)
    except OSError as exc:
        raise FormatError(f"cannot read {what} {path}: {exc}") from exc


def load_observation(observed_file: str, mask_file: str, seed: int = 0) -> MaskedObservation:
    """Observed tensor and boolean mask from files; p is the observed fraction."""
    observed = _read(observed_file, read_tensor, "observed tensor")
    mask = _read(mask_file, read_mask, "mask")
    if mask.shape != observed.shape:
        raise FormatError(f"mask shape {mask.shape} does not match observed {observed.shape}")
    if not mask.any():
        raise FormatError(f"mask {mask_file} observes no entries")
    return MaskedObservation(observed=observed, mask=mask, p=float(mask.mean()), seed=seed)


class CompleteCommand(Command):
    name = "complete"
    description = "Masked completion with early stopping; FGD-best and FGD-ES errors per repeat"
    columns = (
        "p", "sigma", "R", "repeat", "re_best", "re_es", "psnr_best", "psnr_es", "t_check", "error",
    )
    group_by = ("p", "sigma", "R")
    metrics = ("re_best", "re_es", "psnr_best", "psnr_es", "t_check")

    def run_one(self, spec: ExperimentSpec, run: RunSpec, out_dir: Path) -> RunOutcome:
        point = run.point
        truth: Optional[Tensor3] = None
        if spec.truth_file:
            truth = _read(spec.truth_file, read_tensor, "truth tensor")
        elif spec.observed_file is None:
            truth = make_low_rank(point.n1, point.n2, point.r, point.k, run.seed)

        if spec.observed_file:
            obs = load_observation(spec.observed_file, spec.mask_file, run.seed)
            if truth is not None and truth.shape != obs.shape:
                raise FormatError(f"truth shape {truth.shape} does not match observed {obs.shape}")
        else:
            obs = observe(truth, point.p, point.sigma, run.seed)
        train, val = split_observation(obs, point.val_frac, run.seed)
        config = CompletionConfig(
            R=point.R,
            eta=point.eta,
            T=point.T,
            alpha=point.alpha,
            val_frac=point.val_frac,
            seed=run.seed,
            divergence_guard=spec.divergence_guard,
        )
        result = complete(train, val, config, truth=truth)

        row = self.base_row(run)
        row["p"] = obs.p
        row["re_best"] = result.re_best
        row["re_es"] = result.re_es
        row["psnr_best"] = result.psnr_best
        row["psnr_es"] = result.psnr_es
        row["t_check"] = result.t_check

        name = f"traces/point{point.index:03d}_rep{run.repeat:02d}.csv"
        (out_dir / "traces").mkdir(parents=True, exist_ok=True)
        result.trace.write_csv(out_dir / name)
        return RunOutcome(
            row=row,
            iterations=len(result.trace) - 1,
            files=[name],
            summary=result.summary_csv(p=obs.p, sigma=point.sigma),
        )
