"""Cluster entropy of a geometric Brownian motion on twelve horizons.

A GBM path has independent increments, so decimating it only rescales
the walk, and the index I(M, n) should not trend with M. One short path
is noisy; the acceptance suite takes the median over 20 longer paths.
"""

import numpy as np

from clusterentropy import GbmParams, gen_gbm, horizon_curves, horizon_spread, mdi_table, scaled_spec

spec = scaled_spec(1 / 64)
x = gen_gbm(GbmParams(mu=1e-7, sigma=5e-4, n_steps=spec.max_length, seed=1))
table = mdi_table(horizon_curves(x, spec, n_grid=[10, 30, 100, 300]))

print("M    " + "".join(f"n={n:<8d}" for n in table.windows))
for m, row in zip(table.horizons, table.matrix()):
    print(f"{m:<5d}" + "".join(f"{v:<10.2f}" for v in row))
print("relative spread over M:", np.round(horizon_spread(table), 3))
