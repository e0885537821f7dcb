"""
Cumulative horizons resampled to a common length.

Horizon ``M`` covers the first ``N_M`` raw samples (months 1..M). Each is
decimated by ``floor(N_M / N_min)``, where ``N_min`` is the length of the
first horizon, and then cut to exactly ``N_min`` samples.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._errors import DataError, ParameterError

__all__ = [
    "TABLE1_LENGTHS",
    "HorizonSpec",
    "HorizonSet",
    "build_horizon_spec",
    "scaled_spec",
    "resample_horizon",
    "make_horizon_set",
    "write_spec_csv",
]

# cumulative tick counts of a 2018 NASDAQ year, month by month
TABLE1_LENGTHS = (
    586866,
    1117840,
    1704706,
    2291572,
    2906384,
    3493250,
    4069315,
    4712062,
    5243029,
    5885781,
    6461845,
    6982017,
)


@dataclass(frozen=True)
class HorizonSpec:
    boundaries: tuple[int, ...]
    n_min: int
    intervals: tuple[int, ...]

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(b / self.n_min for b in self.boundaries)

    @property
    def max_length(self) -> int:
        return self.boundaries[-1]

    def __len__(self):
        return len(self.boundaries)

    def rows(self):
        """Rows ``(M, N, N_M, t_S, t_S_star)`` in the layout of the horizon table."""
        for m, (b, r, t) in enumerate(zip(self.boundaries, self.ratios, self.intervals), 1):
            yield m, b, self.n_min, r, t


@dataclass
class HorizonSet:
    series: list[np.ndarray]
    target_length: int
    provenance: str = ""
    spec: HorizonSpec | None = field(default=None, repr=False)

    def __post_init__(self):
        bad = [len(s) for s in self.series if len(s) != self.target_length]
        if bad:
            raise DataError(f"horizon lengths {bad} differ from target {self.target_length}")

    def __len__(self):
        return len(self.series)

    def __getitem__(self, m: int) -> np.ndarray:
        """Series of horizon ``m`` (1-based, as in ``M = 1..12``)."""
        if not 1 <= m <= len(self.series):
            raise IndexError(f"horizon {m} outside 1..{len(self.series)}")
        return self.series[m - 1]


def build_horizon_spec(raw_lengths: Sequence[int]) -> HorizonSpec:
    lengths = tuple(int(v) for v in raw_lengths)
    if not lengths:
        raise ParameterError("need at least one horizon length")
    if lengths[0] < 1:
        raise ParameterError("horizon lengths must be positive")
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise ParameterError(f"horizon lengths must be strictly increasing: {lengths}")
    n_min = lengths[0]
    return HorizonSpec(lengths, n_min, tuple(v // n_min for v in lengths))


def scaled_spec(scale: float = 1 / 8, raw_lengths: Sequence[int] = TABLE1_LENGTHS) -> HorizonSpec:
    """Spec with every cumulative length multiplied by ``scale``.

    Raises if rounding the scaled lengths would change any sampling interval.
    """
    if not scale > 0:
        raise ParameterError(f"scale must be positive, got {scale}")
    reference = build_horizon_spec(raw_lengths)
    spec = build_horizon_spec([int(round(v * scale)) for v in raw_lengths])
    if spec.intervals != reference.intervals:
        raise ParameterError(
            f"scale {scale} changes the sampling intervals "
            f"{reference.intervals} -> {spec.intervals}"
        )
    return spec


def resample_horizon(raw, interval: int, target_length: int, offset: int = 0) -> np.ndarray:
    """Keep every ``interval``-th sample from ``offset`` on, then cut to ``target_length``."""
    raw = np.asarray(raw)
    if interval < 1:
        raise ParameterError(f"interval must be >= 1, got {interval}")
    if not 0 <= offset < interval:
        raise ParameterError(f"offset must lie in [0, {interval}), got {offset}")
    if raw.size // interval < target_length:
        raise DataError(
            f"{raw.size} samples at interval {interval} cannot yield {target_length} points"
        )
    return raw[offset::interval][:target_length]


def make_horizon_set(full, spec: HorizonSpec, offset: int = 0, provenance: str = "") -> HorizonSet:
    full = np.asarray(full)
    if full.size < spec.max_length:
        raise DataError(f"series of length {full.size} shorter than largest horizon {spec.max_length}")
    series = [
        resample_horizon(full[:length], interval, spec.n_min, offset)
        for length, interval in zip(spec.boundaries, spec.intervals)
    ]
    return HorizonSet(series, spec.n_min, provenance, spec)


def write_spec_csv(spec: HorizonSpec, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "N", "N_M", "t_S", "t_S_star"])
        for m, b, nm, r, t in spec.rows():
            w.writerow([m, b, nm, f"{r:.4f}", t])
