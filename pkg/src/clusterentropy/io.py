"""Tick ingestion, series files and tidy CSV output."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ._errors import DataError
from .analysis import MdiTable
from .entropy import EntropyCurve

__all__ = [
    "TickSeries",
    "ingest_ticks",
    "write_ticks",
    "read_series",
    "write_series",
    "write_curves_csv",
    "read_curves_csv",
    "write_mdi_csv",
    "write_partition_csv",
]


@dataclass(frozen=True)
class TickSeries:
    prices: np.ndarray
    timestamps: np.ndarray
    month_starts: np.ndarray  # 0-based index of the first tick of each calendar month

    def __len__(self):
        return int(self.prices.size)

    @property
    def boundaries(self) -> tuple[int, ...]:
        """1-based tick number of the first tick of each month."""
        return tuple((self.month_starts + 1).tolist())

    def cumulative_lengths(self) -> list[int]:
        """Raw length of the horizon ending with each month (months 1..M)."""
        return self.month_starts[1:].tolist() + [len(self)]


def ingest_ticks(
    path,
    timestamp_col: str = "timestamp",
    price_col: str = "price",
    decimate: int = 1,
) -> TickSeries:
    """Read a tick CSV with epoch-millisecond timestamps.

    ``decimate`` keeps every k-th tick before month boundaries are located,
    for raw files sampled more finely than needed.
    """
    stamps: list[int] = []
    prices: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file")
        missing = {timestamp_col, price_col} - set(reader.fieldnames)
        if missing:
            raise DataError(f"{path}: missing columns {sorted(missing)}")
        prev = None
        for lineno, row in enumerate(reader, start=2):
            try:
                ts = int(row[timestamp_col])
                px = float(row[price_col])
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: unparsable row ({exc})") from None
            if prev is not None and ts < prev:
                raise DataError(f"{path}:{lineno}: timestamp {ts} decreases (previous {prev})")
            if not px > 0:
                raise DataError(f"{path}:{lineno}: non-positive price {px}")
            stamps.append(ts)
            prices.append(px)
            prev = ts
    if not prices:
        raise DataError(f"{path}: no ticks")
    ts_arr = np.asarray(stamps, dtype=np.int64)[::decimate]
    px_arr = np.asarray(prices, dtype=float)[::decimate]
    months = ts_arr.astype("datetime64[ms]").astype("datetime64[M]")
    starts = np.concatenate([[0], np.flatnonzero(months[1:] != months[:-1]) + 1])
    return TickSeries(px_arr, ts_arr, starts)


def write_ticks(path, timestamps, prices) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["timestamp", "price"])
        for ts, px in zip(np.asarray(timestamps).tolist(), np.asarray(prices, dtype=float).tolist()):
            w.writerow([ts, repr(px)])


def _is_binary(path) -> bool:
    return os.fspath(path).endswith((".bin", ".f64"))


def write_series(path, values) -> None:
    """Write a series as ``value`` CSV, or raw little-endian float64 for ``.bin``/``.f64``."""
    values = np.asarray(values, dtype=float)
    if _is_binary(path):
        values.astype("<f8").tofile(path)
        return
    with open(path, "w") as fh:
        fh.write("value\n")
        fh.writelines(f"{v!r}\n" for v in values.tolist())


def read_series(path) -> np.ndarray:
    if _is_binary(path):
        return np.fromfile(path, dtype="<f8")
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "value":
            raise DataError(f"{path}: expected header 'value', found {header!r}")
        try:
            values = np.array([float(line) for line in fh if line.strip()])
        except ValueError as exc:
            raise DataError(f"{path}: {exc}") from None
    if values.size == 0:
        raise DataError(f"{path}: no values")
    return values


def write_curves_csv(path, curves: Mapping, label_col: bool = False) -> None:
    """Tidy ``M,n,tau,S`` rows.

    ``curves`` maps ``(M, n)`` to a curve, or ``(label, M, n)`` when
    ``label_col`` is set, in which case a leading ``set`` column is written.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow((["set"] if label_col else []) + ["M", "n", "tau", "S"])
        for key in sorted(curves):
            c = curves[key]
            prefix = list(key)
            for tau, s in zip(c.tau.tolist(), c.S.tolist()):
                w.writerow(prefix + [tau, repr(s)])


def read_curves_csv(path) -> dict:
    """Inverse of :func:`write_curves_csv`; keys gain a label when a ``set`` column exists."""
    rows: dict[tuple, tuple[list, list]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"M", "n", "tau", "S"} <= set(reader.fieldnames):
            raise DataError(f"{path}: expected columns M,n,tau,S")
        labelled = "set" in reader.fieldnames
        for row in reader:
            m, n = int(row["M"]), int(row["n"])
            key = (row["set"], m, n) if labelled else (m, n)
            taus, ss = rows.setdefault(key, ([], []))
            taus.append(int(row["tau"]))
            ss.append(float(row["S"]))
    return {
        key: EntropyCurve(np.array(t, dtype=np.int64), np.array(s), n=key[-1], horizon=key[-2])
        for key, (t, s) in rows.items()
    }


def write_mdi_csv(path, tables: Mapping[str, MdiTable] | MdiTable, extra: Iterable[str] = ()) -> None:
    """Tidy ``M,n,I,I_power,I_linear`` rows; a ``set`` column when several tables are given."""
    single = isinstance(tables, MdiTable)
    items = {"": tables} if single else tables
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(([] if single else ["set"]) + ["M", "n", "I", "I_power", "I_linear"])
        for label in sorted(items):
            for (m, n), r in sorted(items[label].values.items()):
                w.writerow(([] if single else [label]) + [m, n, repr(r.I), repr(r.I_power), repr(r.I_linear)])


def write_partition_csv(path, hist: Mapping[int, int]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["tau", "count"])
        for tau in sorted(hist):
            w.writerow([tau, hist[tau]])
