"""Per-figure plot data and table layouts from a finished sweep directory.

Every ``figK.csv`` shares the columns ``panel,set,M,n,x,y``. Entropy panels
(``panel=S``) carry ``x=tau, y=S``; index panels (``panel=I``) carry
``x=n, y=I``. Sets missing from the sweep are skipped.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

from ._errors import DataError
from .horizons import build_horizon_spec, TABLE1_LENGTHS, write_spec_csv
from .presets import SweepConfig, load_presets

__all__ = ["FIGURES", "TABLE4_SETS", "figure_sets", "write_report"]

log = logging.getLogger(__name__)

# figure -> (which presets, entropy-curve horizons, include the index panel)
FIGURES = {
    1: ("gbm", (1, 12), True),
    2: ("fbm_ce", (1, 12), False),
    3: ("fbm", (), True),
    4: ("table2", (1,), False),
    5: ("table2", (12,), False),
    6: ("table2", (), True),
    7: ("table3", (1,), False),
    8: ("table3", (12,), False),
    9: ("table3", (), True),
}

TABLE4_SETS = ("b1", "f1", "l1", "a2", "e2", "i2", "n2", "o2")


def figure_sets(fig: int, config: SweepConfig) -> list[str]:
    group = FIGURES[fig][0]
    if group == "gbm":
        return config.group("gbm")
    if group == "fbm_ce":
        return [v for v in ("fbm_h30", "fbm_h50", "fbm_h80") if v in config.presets]
    if group == "fbm":
        return [v for v in config.group("fbm") if v != "fbm_h10"]
    return config.group(group)


def _read_rows(path: Path) -> list[dict]:
    if not path.exists():
        raise DataError(f"{path} not found; run a sweep first")
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_report(sweep_dir, out=None, config: SweepConfig | None = None) -> list[Path]:
    """Write ``fig1.csv`` .. ``fig9.csv``, ``table1.csv`` and ``table4.csv``."""
    sweep_dir = Path(sweep_dir)
    out = Path(out) if out is not None else sweep_dir
    out.mkdir(parents=True, exist_ok=True)
    config = config or load_presets()

    curves: dict[str, list[dict]] = {}
    for row in _read_rows(sweep_dir / "curves.csv"):
        curves.setdefault(row["set"], []).append(row)
    mdi: dict[str, list[dict]] = {}
    for row in _read_rows(sweep_dir / "mdi_median.csv"):
        mdi.setdefault(row["set"], []).append(row)

    written = []
    for fig, (_, horizons, with_index) in FIGURES.items():
        sets = [s for s in figure_sets(fig, config) if s in curves]
        if not sets:
            log.warning("fig%d: no matching sets in %s", fig, sweep_dir)
        path = out / f"fig{fig}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["panel", "set", "M", "n", "x", "y"])
            for s in sets:
                for row in curves[s]:
                    if int(row["M"]) in horizons:
                        w.writerow(["S", s, row["M"], row["n"], row["tau"], row["S"]])
                if with_index:
                    for row in mdi.get(s, []):
                        w.writerow(["I", s, row["M"], row["n"], row["n"], row["I"]])
        written.append(path)

    path = out / "table1.csv"
    write_spec_csv(build_horizon_spec(TABLE1_LENGTHS), path)
    written.append(path)

    ttest_path = sweep_dir / "ttest.csv"
    if ttest_path.exists():
        p = {(int(r["M"]), r["set"]): r["p"] for r in _read_rows(ttest_path)}
        sets = [s for s in TABLE4_SETS if any(k[1] == s for k in p)]
        months = sorted({m for m, _ in p})
        path = out / "table4.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["M"] + sets)
            for m in months:
                w.writerow([m] + [p.get((m, s), "") for s in sets])
        written.append(path)
    return written
