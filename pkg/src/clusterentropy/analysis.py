"""Horizon-by-window analysis of one series: entropy curves and index table."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._errors import DataError
from .entropy import EntropyCurve, MdiResult, cluster_pdf, entropy_curve, mdi, median_curve
from .horizons import HorizonSet, HorizonSpec, make_horizon_set
from .partition import cluster_histogram, partition

__all__ = [
    "MdiTable",
    "default_n_grid",
    "horizon_curves",
    "mdi_table",
    "horizon_spread",
    "median_curves",
    "median_table",
]


@dataclass
class MdiTable:
    """``I(M, n)`` and its power-law / linear split, keyed by ``(M, n)``."""

    values: dict[tuple[int, int], MdiResult] = field(default_factory=dict)

    @property
    def horizons(self) -> list[int]:
        return sorted({m for m, _ in self.values})

    @property
    def windows(self) -> list[int]:
        return sorted({n for _, n in self.values})

    def matrix(self, part: str = "I") -> np.ndarray:
        """Array of shape ``(len(horizons), len(windows))``; NaN where missing."""
        hs, ns = self.horizons, self.windows
        out = np.full((len(hs), len(ns)), np.nan)
        for (m, n), r in self.values.items():
            out[hs.index(m), ns.index(n)] = getattr(r, part)
        return out

    def __getitem__(self, key: tuple[int, int]) -> MdiResult:
        return self.values[key]

    def __len__(self):
        return len(self.values)


def default_n_grid(length: int, count: int = 20, n_lo: int = 10, frac: float = 1 / 20) -> list[int]:
    """``count`` log-spaced integer windows from ``n_lo`` to ``length * frac``."""
    n_hi = int(length * frac)
    if n_hi <= n_lo:
        raise DataError(f"series of length {length} too short for windows >= {n_lo}")
    grid = np.unique(np.round(np.geomspace(n_lo, n_hi, count)).astype(int))
    return grid.tolist()


def horizon_curves(
    series,
    spec: HorizonSpec | None = None,
    n_grid: Sequence[int] | None = None,
    include_boundary: bool = False,
) -> dict[tuple[int, int], EntropyCurve]:
    """Entropy curve for every horizon ``M`` and window ``n``.

    ``series`` is either a full-length series, cut into horizons with
    ``spec``, or a ready :class:`HorizonSet`. Cells whose partition holds no
    complete cluster are left out.
    """
    hset = series if isinstance(series, HorizonSet) else make_horizon_set(series, spec)
    if n_grid is None:
        n_grid = default_n_grid(hset.target_length)
    out = {}
    for m, y in enumerate(hset.series, 1):
        for n in n_grid:
            hist = cluster_histogram(partition(y, n, include_boundary))
            if hist:
                out[(m, n)] = entropy_curve(cluster_pdf(hist, n=n), horizon=m)
    return out


def mdi_table(curves: Mapping[tuple[int, int], EntropyCurve]) -> MdiTable:
    return MdiTable({key: mdi(c) for key, c in curves.items()})


def horizon_spread(table: MdiTable | np.ndarray) -> np.ndarray:
    """Relative spread ``(max_M I - min_M I) / mean_M I`` at each window."""
    I = table.matrix() if isinstance(table, MdiTable) else np.asarray(table)
    return (np.nanmax(I, axis=0) - np.nanmin(I, axis=0)) / np.nanmean(I, axis=0)


def median_curves(
    members: Iterable[Mapping[tuple[int, int], EntropyCurve]], min_fraction: float = 0.5
) -> dict[tuple[int, int], EntropyCurve]:
    """Ensemble median curve at every ``(M, n)`` cell."""
    members = list(members)
    keys = sorted(set().union(*members))
    return {
        k: median_curve([m[k] for m in members if k in m], min_fraction) for k in keys
    }


def median_table(tables: Iterable[MdiTable]) -> MdiTable:
    """Cellwise ensemble median of index tables."""
    tables = list(tables)
    keys = sorted(set().union(*(t.values for t in tables)))
    out = {}
    for k in keys:
        rows = np.array([t.values[k] for t in tables if k in t.values])
        med = np.median(rows, axis=0)
        # keep the split additive after taking medians part by part
        out[k] = MdiResult(float(med[1] + med[2]), float(med[1]), float(med[2]))
    return MdiTable(out)
