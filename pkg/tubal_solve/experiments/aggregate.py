"""
Mean and median of per-repeat rows, grouped by grid point.
"""

from typing import Any, Sequence

import numpy as np


def _number(value: Any) -> float:
    if value is None or value == "":
        return np.nan
    return float(value)


def aggregate_rows(
    rows: Sequence[dict[str, Any]], group_by: Sequence[str], metrics: Sequence[str]
) -> tuple[list[str], list[dict[str, Any]]]:
    """One row per distinct ``group_by`` tuple, in first-seen order.

    Error rows are counted under ``failed`` and left out of the statistics.
    """
    groups: dict[tuple, list[dict[str, Any]]] = {}
    for row in rows:
        groups.setdefault(tuple(row.get(name) for name in group_by), []).append(row)

    columns = list(group_by) + ["count", "failed"]
    for metric in metrics:
        columns += [f"{metric}_mean", f"{metric}_median"]

    summary = []
    for key, members in groups.items():
        ok = [row for row in members if not row.get("error")]
        entry: dict[str, Any] = dict(zip(group_by, key))
        entry["count"] = len(ok)
        entry["failed"] = len(members) - len(ok)
        for metric in metrics:
            values = np.array([_number(row.get(metric)) for row in ok], dtype=float)
            values = values[~np.isnan(values)]
            entry[f"{metric}_mean"] = float(values.mean()) if values.size else None
            entry[f"{metric}_median"] = float(np.median(values)) if values.size else None
        summary.append(entry)
    return columns, summary
