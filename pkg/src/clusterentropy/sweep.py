"""
Seeded ensemble sweep over model presets.

Every preset is simulated once per seed at full horizon length, cut into
the twelve horizons and turned into entropy curves on the window grid.
Each member is tested against the benchmark ensemble-median curve of its
horizon, pairing entropy values at matching ``(tau, n)`` over all windows.
Only ensemble summaries are kept once a preset is done, so memory stays
bounded by one preset's members.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import platform
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import MdiTable, horizon_curves, horizon_spread, mdi_table, median_curves, median_table
from .entropy import EntropyCurve
from .horizons import make_horizon_set
from .io import write_curves_csv, write_mdi_csv
from .presets import Preset, SweepConfig, generate_series
from .stats import align_curves, paired_t_test

__all__ = ["CellFailure", "PresetSummary", "SweepResult", "run_member", "run_sweep", "ensemble_spread"]

log = logging.getLogger(__name__)

BENCHMARK = "benchmark"

Curves = dict[tuple[int, int], EntropyCurve]


@dataclass(frozen=True)
class CellFailure:
    label: str
    seed: int
    error: str


@dataclass
class PresetSummary:
    label: str
    seeds: list[int]
    median_curves: Curves
    tables: list[MdiTable]
    median_table: MdiTable
    spread: np.ndarray
    # per horizon: member p-values, t statistics and pair counts against the benchmark
    ttest: dict[int, dict[str, list]] = field(default_factory=dict)

    def median_p(self, m: int) -> float:
        return float(np.median(self.ttest[m]["p"]))


@dataclass
class SweepResult:
    config: SweepConfig
    summaries: dict[str, PresetSummary]
    failures: list[CellFailure]

    @property
    def ok(self) -> bool:
        return not self.failures

    def p_table(self) -> dict[tuple[int, str], float]:
        return {
            (m, label): s.median_p(m)
            for label, s in self.summaries.items()
            for m in sorted(s.ttest)
        }


def ensemble_spread(tables: list[MdiTable]) -> np.ndarray:
    """Horizon spread of the ensemble-median ``I(M, n)`` at each window."""
    return horizon_spread(np.median(np.stack([t.matrix() for t in tables]), axis=0))


def run_member(preset: Preset, seed: int, config: SweepConfig) -> Curves:
    """Entropy curves of one seeded realisation on every horizon and window."""
    spec = config.spec
    x = generate_series(preset, spec.max_length, seed, config)
    hset = make_horizon_set(x, spec, provenance=f"{preset.label}/seed={seed}")
    return horizon_curves(hset, n_grid=config.windows, include_boundary=config.include_boundary)


def _member_task(args):
    preset, seed, config = args
    try:
        return seed, run_member(preset, seed, config), None
    except Exception as exc:  # isolate the cell, keep the sweep going
        log.debug("cell %s/%d failed\n%s", preset.label, seed, traceback.format_exc())
        return seed, None, f"{type(exc).__name__}: {exc}"


def _by_horizon(curves: Curves) -> dict[int, list[EntropyCurve]]:
    out: dict[int, list[EntropyCurve]] = {}
    for (m, _), c in sorted(curves.items()):
        out.setdefault(m, []).append(c)
    return out


def _summarise(label, members, ref: dict[int, list[EntropyCurve]] | None) -> PresetSummary:
    seeds = [s for s, _ in members]
    curves = [c for _, c in members]
    tables = [mdi_table(c) for c in curves]
    summary = PresetSummary(
        label=label,
        seeds=seeds,
        median_curves=median_curves(curves),
        tables=tables,
        median_table=median_table(tables),
        spread=ensemble_spread(tables),
    )
    if ref is not None:
        for c in curves:
            for m, xs in _by_horizon(c).items():
                if m not in ref:
                    continue
                r = paired_t_test(align_curves(xs, ref[m]))
                cell = summary.ttest.setdefault(m, {"p": [], "t": [], "pairs": []})
                cell["p"].append(r.p_value)
                cell["t"].append(r.t_stat)
                cell["pairs"].append(r.n_pairs)
    return summary


def _run_preset(preset, seeds, config, pool, failures):
    tasks = [(preset, s, config) for s in seeds]
    results = pool.map(_member_task, tasks) if pool is not None else map(_member_task, tasks)
    members = []
    for seed, curves, err in results:
        if err is not None:
            failures.append(CellFailure(preset.label, seed, err))
        else:
            members.append((seed, curves))
    return members


def run_sweep(config: SweepConfig, out=None, jobs: int = 1) -> SweepResult:
    """Run the benchmark and every selected preset; write results when ``out`` is set.

    Members are generated in seed order and reduced in that order, so the
    numbers do not depend on ``jobs``. A failing member is recorded and left
    out of its preset's ensemble; the other cells are untouched.
    """
    failures: list[CellFailure] = []
    summaries: dict[str, PresetSummary] = {}
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        bench_preset = Preset(BENCHMARK, "fbm", hurst=config.benchmark_hurst)
        members = _run_preset(bench_preset, config.benchmark_seeds(), config, pool, failures)
        if not members:
            raise RuntimeError("every benchmark member failed")
        bench = _summarise(BENCHMARK, members, None)
        summaries[BENCHMARK] = bench
        ref = _by_horizon(bench.median_curves)
        for label in config.selected:
            log.info("preset %s", label)
            members = _run_preset(config[label], config.member_seeds(), config, pool, failures)
            if members:
                summaries[label] = _summarise(label, members, ref)
    finally:
        if pool is not None:
            pool.shutdown()
    result = SweepResult(config, summaries, failures)
    if out is not None:
        write_sweep(result, out)
    return result


# ------------------------------------------------------------------ #
# output
# ------------------------------------------------------------------ #
def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_sweep(result: SweepResult, out) -> list[Path]:
    """Write tidy CSVs, a t-test summary and a manifest into ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    sums = result.summaries
    written = []

    path = out / "curves.csv"
    write_curves_csv(
        path,
        {(label, m, n): c for label, s in sums.items() for (m, n), c in s.median_curves.items()},
        label_col=True,
    )
    written.append(path)

    path = out / "mdi_median.csv"
    write_mdi_csv(path, {label: s.median_table for label, s in sums.items()})
    written.append(path)

    path = out / "mdi.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["set", "seed", "M", "n", "I", "I_power", "I_linear"])
        for label in sorted(sums):
            s = sums[label]
            for seed, table in zip(s.seeds, s.tables):
                for (m, n), r in sorted(table.values.items()):
                    w.writerow([label, seed, m, n, repr(r.I), repr(r.I_power), repr(r.I_linear)])
    written.append(path)

    path = out / "spread.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["set", "n", "spread"])
        for label in sorted(sums):
            s = sums[label]
            for n, v in zip(s.median_table.windows, s.spread.tolist()):
                w.writerow([label, n, repr(v)])
    written.append(path)

    path = out / "ttest.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "set", "p"])
        for (m, label), p in sorted(result.p_table().items()):
            w.writerow([m, label, repr(p)])
    written.append(path)

    path = out / "ttest.json"
    summary = {
        label: {
            str(m): {
                "p_median": float(np.median(cell["p"])),
                "t_median": float(np.median(cell["t"])),
                "dof_median": float(np.median(cell["pairs"])) - 1,
                "pairs": cell["pairs"],
                "p": cell["p"],
                "t": cell["t"],
            }
            for m, cell in sorted(s.ttest.items())
        }
        for label, s in sorted(sums.items())
        if s.ttest
    }
    path.write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    written.append(path)

    from . import __version__
    import scipy

    manifest = {
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "config": result.config.as_dict(),
        "member_seeds": result.config.member_seeds(),
        "benchmark_seeds": result.config.benchmark_seeds(),
        "completed": {label: s.seeds for label, s in sorted(sums.items())},
        "failures": [f.__dict__ for f in result.failures],
        "files": {p.name: _sha256(p) for p in written},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    written.append(path)
    return written


def load_sweep_tables(out) -> tuple[dict, dict]:
    """Read ``curves.csv`` and ``mdi_median.csv`` back from a sweep directory."""
    from .io import read_curves_csv

    out = Path(out)
    curves = read_curves_csv(out / "curves.csv")
    mdi = {}
    with open(out / "mdi_median.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            mdi[(row["set"], int(row["M"]), int(row["n"]))] = (
                float(row["I"]), float(row["I_power"]), float(row["I_linear"])
            )
    return curves, mdi


def default_jobs() -> int:
    return max(1, (os.cpu_count() or 1))
