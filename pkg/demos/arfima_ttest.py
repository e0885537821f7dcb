"""Paired t-test of an ARFIMA preset against the H=0.5 benchmark.

Runs a reduced sweep (short horizons, few seeds) and prints the median
p-value per horizon.
"""

from clusterentropy import load_presets, run_sweep

cfg = load_presets(scale=1 / 64, n_seeds=3).select(["b1", "o2"])
result = run_sweep(cfg)
for label in cfg.selected:
    s = result.summaries[label]
    print(label, " ".join(f"M={m}:{s.median_p(m):.2e}" for m in sorted(s.ttest)))
