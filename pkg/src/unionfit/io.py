"""Dataset file I/O.

Datasets are stored as CSV with one point per row and N numeric columns
(no header unless the caller says so).  Values are written with repr so
a read-back reproduces the exact float64 entries.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import InvalidSpec
from .model import Bundle, DataSet, Partition


def load_dataset(path, header: bool = False) -> DataSet:
    """Read a dataset file; rows become the columns of the point matrix."""
    path = Path(path)
    rows: list[list[float]] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        for idx, row in enumerate(reader):
            if header and idx == 0:
                continue
            if not row:
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise InvalidSpec(f"{path}: line {idx + 1}: {exc}") from exc
    if not rows:
        raise InvalidSpec(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidSpec(f"{path}: rows have inconsistent column counts")
    return DataSet(np.asarray(rows, dtype=float).T)


def save_dataset(data: DataSet, path) -> None:
    """Write one point per row, repr-formatted for exact round-trips."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        for point in data.points.T:
            writer.writerow([repr(float(x)) for x in point])


def ground_truth_to_dict(bundle: Bundle, partition: Partition) -> dict:
    return {
        "cap_dim": bundle.cap_dim,
        "bases": [v.basis.tolist() for v in bundle],
        "groups": [list(g) for g in partition.groups],
        "count": partition.count,
    }
