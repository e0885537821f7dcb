"""Moving-average partition of a series into clusters.

A cluster is the stretch of the series between two consecutive crossings
of the series with its own trailing moving average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from ._errors import ParameterError

__all__ = [
    "AlignedPair",
    "ClusterPartition",
    "moving_average",
    "find_clusters",
    "cluster_histogram",
    "partition",
]


@dataclass(frozen=True)
class AlignedPair:
    """Series and trailing average on the common index range ``t = n..N``."""

    y: np.ndarray
    ma: np.ndarray
    n: int

    def __post_init__(self):
        if self.y.shape != self.ma.shape:
            raise ParameterError("y and ma must have equal lengths")
        if self.n < 2:
            raise ParameterError(f"window must be >= 2, got {self.n}")


@dataclass(frozen=True)
class ClusterPartition:
    lengths: np.ndarray
    n: int
    include_boundary: bool = False
    n_crossings: int = 0
    first_crossing: int | None = None
    last_crossing: int | None = None

    @property
    def degenerate(self) -> bool:
        """Fewer than two crossings: no complete cluster exists."""
        return self.n_crossings < 2

    def __len__(self):
        return int(self.lengths.size)


@numba.njit(cache=True)
def _rolling_sum(y, n):
    # Neumaier-compensated running sum; the window sum is formed from
    # the difference of two compensated prefix sums.
    m = y.size
    hi = np.empty(m + 1)
    lo = np.empty(m + 1)
    s = 0.0
    c = 0.0
    hi[0] = 0.0
    lo[0] = 0.0
    for i in range(m):
        v = y[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        hi[i + 1] = s
        lo[i + 1] = c
    out = np.empty(m - n + 1)
    for i in range(m - n + 1):
        a_hi = hi[i + n] - hi[i]
        # error of the subtraction itself, recovered by TwoSum
        bb = a_hi - hi[i + n]
        err = (hi[i + n] - (a_hi - bb)) + (-hi[i] - bb)
        out[i] = a_hi + (err + (lo[i + n] - lo[i]))
    return out


def moving_average(y, n: int) -> AlignedPair:
    """Trailing average of the ``n`` most recent samples.

    The first ``n - 1`` samples have no full window and are dropped, so the
    result covers ``N - n + 1`` points.
    """
    y = np.ascontiguousarray(y, dtype=float)
    if not 2 <= n <= y.size:
        raise ParameterError(f"window n={n} outside [2, {y.size}]")
    ma = _rolling_sum(y, int(n)) / n
    return AlignedPair(y=y[n - 1 :], ma=ma, n=int(n))


def _fill_signs(diff: np.ndarray) -> np.ndarray:
    """Sign of ``diff`` where exact zeros inherit the previous non-zero sign."""
    s = np.sign(diff)
    nz = np.flatnonzero(s)
    if nz.size == 0:
        return s
    # index of the last non-zero at or before each position
    idx = np.where(s != 0, np.arange(s.size), 0)
    np.maximum.accumulate(idx, out=idx)
    filled = s[idx]
    # leading zeros take the first non-zero sign: they never form a crossing
    filled[: nz[0]] = s[nz[0]]
    return filled


def find_clusters(pair: AlignedPair, include_boundary: bool = False) -> ClusterPartition:
    """Cluster lengths between consecutive crossings of series and average.

    A crossing is located at index ``i`` of the aligned range when the sign
    of ``y - ma`` at ``i`` differs from the sign at ``i - 1``. Segments before
    the first and after the last crossing are censored and dropped unless
    ``include_boundary`` is set.
    """
    signs = _fill_signs(pair.y - pair.ma)
    cross = np.flatnonzero(signs[1:] != signs[:-1]) + 1
    if include_boundary:
        edges = np.concatenate([[0], cross, [signs.size]])
        lengths = np.diff(edges)
        lengths = lengths[lengths > 0]
    elif cross.size >= 2:
        lengths = np.diff(cross)
    else:
        lengths = np.empty(0, dtype=np.int64)
    return ClusterPartition(
        lengths=lengths.astype(np.int64),
        n=pair.n,
        include_boundary=include_boundary,
        n_crossings=int(cross.size),
        first_crossing=int(cross[0]) if cross.size else None,
        last_crossing=int(cross[-1]) if cross.size else None,
    )


def partition(y, n: int, include_boundary: bool = False) -> ClusterPartition:
    """Shortcut for ``find_clusters(moving_average(y, n))``."""
    return find_clusters(moving_average(y, n), include_boundary=include_boundary)


def cluster_histogram(part: ClusterPartition) -> dict[int, int]:
    """Map cluster length to the number of clusters with that length."""
    if part.lengths.size == 0:
        return {}
    taus, counts = np.unique(part.lengths, return_counts=True)
    return dict(zip(taus.tolist(), counts.tolist()))
