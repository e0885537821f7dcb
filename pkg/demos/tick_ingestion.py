"""From a tick CSV to month horizons and entropy curves.

Writes a synthetic three-month tick file, reads it back, derives the
horizon intervals from the monthly tick counts and computes curves.
"""

import datetime as dt
import tempfile
from pathlib import Path

import numpy as np

from clusterentropy import build_horizon_spec, horizon_curves, ingest_ticks
from clusterentropy.io import write_ticks

rng = np.random.default_rng(0)
stamps = []
for month, count in [(1, 4000), (2, 3500), (3, 4200)]:
    start = int(dt.datetime(2018, month, 1, tzinfo=dt.timezone.utc).timestamp() * 1000)
    stamps += [start + 500 * i for i in range(count)]
prices = 100 * np.exp(np.cumsum(2e-4 * rng.standard_normal(len(stamps))))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "ticks.csv"
    write_ticks(path, stamps, prices)
    ticks = ingest_ticks(path)

spec = build_horizon_spec(ticks.cumulative_lengths())
print("month boundaries:", ticks.boundaries)
print("intervals t_S*:", spec.intervals, "samples per horizon:", spec.n_min)
curves = horizon_curves(ticks.prices, spec, n_grid=[10, 40])
for (m, n), c in sorted(curves.items()):
    print(f"M={m} n={n}: {len(c)} cluster lengths, max tau {c.tau.max()}")
