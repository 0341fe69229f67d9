"""
Per-iteration solver records and their CSV export.
"""

import csv
import io
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterator, Optional, Union

import numpy as np

TRACE_COLUMNS = (
    "iter",
    "train_loss",
    "rse",
    "sigma_min_signal",
    "overparam_norm",
    "misalignment",
    "elapsed_ms",
)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class TraceRecord:
    iter: int
    train_loss: float
    rse: Optional[float] = None
    sigma_min_signal: Optional[float] = None
    overparam_norm: Optional[float] = None
    misalignment: Optional[float] = None
    elapsed_ms: float = 0.0
    val_loss: Optional[float] = None


@dataclass
class SolveTrace:
    records: list[TraceRecord] = field(default_factory=list)

    def append(self, record: TraceRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> TraceRecord:
        return self.records[index]

    def column(self, name: str) -> np.ndarray:
        """Values of one field as floats, NaN where a record has none."""
        if name not in {f.name for f in fields(TraceRecord)}:
            raise KeyError(name)
        values = [getattr(record, name) for record in self.records]
        return np.array([np.nan if v is None else v for v in values], dtype=float)

    def min_rse(self) -> Optional[float]:
        rse = self.column("rse")
        if rse.size == 0 or np.all(np.isnan(rse)):
            return None
        return float(np.nanmin(rse))

    def argmin_rse(self) -> Optional[int]:
        rse = self.column("rse")
        if rse.size == 0 or np.all(np.isnan(rse)):
            return None
        return self.records[int(np.nanargmin(rse))].iter

    def final(self) -> TraceRecord:
        return self.records[-1]

    def has_val_loss(self) -> bool:
        return any(record.val_loss is not None for record in self.records)

    def to_csv(self, include_val_loss: Optional[bool] = None, timing: bool = True) -> str:
        if include_val_loss is None:
            include_val_loss = self.has_val_loss()
        columns = list(TRACE_COLUMNS)
        if not timing:
            columns.remove("elapsed_ms")
        if include_val_loss:
            columns.append("val_loss")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in self.records:
            writer.writerow([format_value(getattr(record, name)) for name in columns])
        return buffer.getvalue()

    def write_csv(self, path: Union[str, Path], **kwargs) -> None:
        Path(path).write_text(self.to_csv(**kwargs), encoding="utf-8")
