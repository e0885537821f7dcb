"""Horizon spread of I(M, n) for antipersistent, Brownian and persistent FBM.

Each Hurst exponent gets a small seeded ensemble; the spread is taken on
the ensemble-median index.
"""

import numpy as np

from clusterentropy import FbmParams, gen_fbm, horizon_curves, mdi_table, scaled_spec
from clusterentropy.sweep import ensemble_spread

spec = scaled_spec(1 / 64)
grid = [10, 30, 100, 300]
for hurst in (0.3, 0.5, 0.8):
    tables = [
        mdi_table(horizon_curves(gen_fbm(FbmParams(hurst, spec.max_length, seed=s)), spec, n_grid=grid))
        for s in range(5)
    ]
    spread = ensemble_spread(tables)
    print(f"H={hurst}: spread per window {np.round(spread, 3)}  max {spread.max():.3f}")
