"""The bundle/partition duality: best rank-k subspace per group and
nearest-subspace assignment of points to a bundle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPartition, OutOfRange
from .metrics import _as_columns, distance_table
from .model import Bundle, DataSet, Partition, Subspace, rank_from_singular_values

# Two subspaces count as tied for a point when their squared distances
# differ by at most this much.
TIE_TOL = 1e-12


@dataclass(frozen=True)
class AssignmentTrace:
    """Per-point record of a nearest-subspace assignment."""

    chosen: np.ndarray  # group index per point, minimizes the distance row
    dist2: np.ndarray  # squared distance to the chosen subspace
    tie_flags: np.ndarray  # True where >= 2 subspaces sit within TIE_TOL

    def __post_init__(self):
        for name in ("chosen", "dist2", "tie_flags"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def best_subspace(matrix, k: int) -> Subspace:
    """Span of the top min(k, rank) left singular vectors of the column slice.

    An empty slice (or k = 0) maps to the zero subspace, and the fitted
    dimension drops below k whenever the slice has lower rank.
    """
    if k < 0:
        raise OutOfRange("k must be nonnegative")
    m = _as_columns(matrix)
    n_rows, n_cols = m.shape
    if n_cols == 0 or k == 0:
        return Subspace.zero(n_rows)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    rank = rank_from_singular_values(s, (n_rows, n_cols))
    return Subspace(u[:, : min(k, rank)])


def bundle_from_partition(data: DataSet, partition: Partition, k: int) -> Bundle:
    """Fit the best rank-<=k subspace to each group; empty groups map to {0}."""
    if partition.count != data.count:
        raise InvalidPartition(
            f"partition covers {partition.count} points, dataset has {data.count}"
        )
    subspaces = tuple(
        best_subspace(data.take(group), k) if group else Subspace.zero(data.ambient_dim)
        for group in partition.groups
    )
    return Bundle(subspaces, cap_dim=k)


def partition_from_bundle(
    data: DataSet, bundle: Bundle
) -> tuple[Partition, AssignmentTrace]:
    """Assign every point to its nearest subspace, ties to the lowest index."""
    table = distance_table(data, bundle)
    chosen = np.argmin(table, axis=0)
    dist2 = table[chosen, np.arange(data.count)]
    tie_flags = np.sum(table <= dist2[None, :] + TIE_TOL, axis=0) >= 2
    partition = Partition.from_labels(chosen, len(bundle))
    return partition, AssignmentTrace(chosen, dist2, tie_flags)
