"""Acceptance suite.

Each test prints one ``PASS``/``FAIL criterion k`` line and repeats it in
the terminal summary. Run with ``pytest tests/test_acceptance.py -v -s``.
The ensemble criteria share one desk-scale sweep (horizons of 73,358
samples, 20 seeds), which dominates the runtime.
"""

import numpy as np
import pytest
from scipy.special import gammaln, gammasgn

from clusterentropy import (
    ArfimaParams,
    FbmParams,
    build_horizon_spec,
    cluster_histogram,
    cluster_pdf,
    entropy_curve,
    fit_power_law,
    frac_diff_coeffs,
    gen_arfima,
    gen_fbm,
    load_presets,
    mdi,
    paired_t_test,
    partition,
    periodogram_slope,
    run_sweep,
    TABLE1_LENGTHS,
)
from clusterentropy.series import fgn
from clusterentropy.sweep import default_jobs

N_SPECTRAL = 2**17
ENSEMBLE = 10
TABLE4_ROW = ("b1", "f1", "l1", "i2", "n2", "o2")
DESK_SETS = ("gbm", "fbm_h30", "fbm_h50", "fbm_h80") + TABLE4_ROW


@pytest.fixture(scope="module")
def desk_sweep(tmp_path_factory):
    cfg = load_presets(scale=1 / 8, n_seeds=20).select(DESK_SETS)
    return run_sweep(cfg, tmp_path_factory.mktemp("desk"), jobs=default_jobs())


def test_criterion_1_frac_diff_coefficients(verdict):
    worst = 0.0
    k = np.arange(101)
    for d in (0.05, 0.15, 0.25, 0.35, 0.48):
        ref = gammasgn(k - d) * gammasgn(-d) * np.exp(gammaln(k - d) - gammaln(-d) - gammaln(k + 1))
        got = frac_diff_coeffs(d, 100)
        worst = max(worst, float(np.max(np.abs(got / ref - 1.0))))
    assert verdict(1, worst <= 1e-12, f"max relative error vs log-Gamma {worst:.2e} (tol 1e-12)")


def test_criterion_2_generator_spectra(verdict):
    rows = []
    for d in (0.1, 0.25, 0.4):
        s = np.median([periodogram_slope(gen_arfima(ArfimaParams(d=d, n_steps=N_SPECTRAL, seed=i))) for i in range(ENSEMBLE)])
        rows.append((f"arfima d={d}", s, -2 * d))
    for h in (0.3, 0.8):
        s = np.median([periodogram_slope(fgn(h, N_SPECTRAL, np.random.default_rng(i))[0]) for i in range(ENSEMBLE)])
        rows.append((f"fgn H={h}", s, 1 - 2 * h))
    ok = all(abs(s - target) <= 0.15 for _, s, target in rows)
    detail = "; ".join(f"{name} slope {s:+.3f} vs {t:+.2f}" for name, s, t in rows)
    assert verdict(2, ok, detail)


def test_criterion_3_hurst_recovery(verdict):
    n = 1000
    rows = []
    for h in (0.3, 0.5, 0.8):
        est = []
        for i in range(ENSEMBLE):
            x = gen_fbm(FbmParams(h, N_SPECTRAL, seed=i))
            est.append(fit_power_law(cluster_pdf(cluster_histogram(partition(x, n)), n)).H)
        rows.append((h, float(np.median(est))))
    ok = all(abs(e - h) <= 0.1 for h, e in rows)
    assert verdict(3, ok, "; ".join(f"H={h} est {e:.3f}" for h, e in rows) + " (tol 0.1)")


def test_criterion_4_entropy_limits(verdict):
    single = entropy_curve(cluster_pdf({7: 123}))
    ok = single.S.tolist() == [0.0]
    bad_k = []
    for k in range(1, 501):
        curve = entropy_curve(cluster_pdf({t: 3 for t in range(1, k + 1)}))
        if not np.all(curve.S == np.log(k)):
            bad_k.append(k)
    ok = ok and not bad_k
    assert verdict(4, ok, f"single length S={single.S.tolist()}; uniform k=1..500 exact ln k, mismatches {len(bad_k)}")


def test_criterion_5_gbm_horizon_invariance(verdict, desk_sweep):
    gbm = desk_sweep.summaries["gbm"].spread
    h80 = desk_sweep.summaries["fbm_h80"].spread
    below_10 = bool(np.all(gbm < 0.10))
    below_h80 = gbm < h80
    ok = below_10 and bool(np.all(below_h80))
    detail = (
        f"gbm max spread {gbm.max():.4f} (< 0.10: {below_10}); "
        f"gbm < fbm H=0.8 at {int(below_h80.sum())}/{below_h80.size} windows "
        f"(gbm {np.round(gbm, 4).tolist()} vs H=0.8 {np.round(h80, 4).tolist()})"
    )
    assert verdict(5, ok, detail)


def test_criterion_6_fbm_dichotomy(verdict, desk_sweep):
    s = {h: float(desk_sweep.summaries[f"fbm_h{h}"].spread.max()) for h in (30, 50, 80)}
    ok = s[30] < s[50] < s[80]
    assert verdict(6, ok, f"max spread H=0.3 {s[30]:.4f} < H=0.5 {s[50]:.4f} < H=0.8 {s[80]:.4f}")


def test_criterion_7_table4_ordering(verdict, desk_sweep):
    sums = desk_sweep.summaries
    p1 = [sums[label].median_p(1) for label in TABLE4_ROW]
    p12 = [sums[label].median_p(12) for label in TABLE4_ROW]
    ordered = all(a > b for a, b in zip(p1, p1[1:]))
    rising = all(b > a for a, b in zip(p1, p12))
    detail = (
        f"M=1 p {dict(zip(TABLE4_ROW, [f'{v:.3g}' for v in p1]))} ordered: {ordered}; "
        f"M=12 p {dict(zip(TABLE4_ROW, [f'{v:.3g}' for v in p12]))} above M=1 for all: {rising}"
    )
    assert verdict(7, ordered and rising, detail)


def test_criterion_8_table1_arithmetic(verdict):
    got = build_horizon_spec(TABLE1_LENGTHS).intervals
    want = (1, 1, 2, 3, 4, 5, 6, 8, 8, 10, 11, 11)
    assert verdict(8, got == want, f"t_S* {got}")


def test_criterion_9_property_suites(verdict, tmp_path):
    rng = np.random.default_rng(9)
    # conservation: cluster lengths tile the span between first and last crossing
    conserved = 0
    norm_err = 0.0
    split_exact = True
    for _ in range(1000):
        size = int(rng.integers(20, 3000))
        n = int(rng.integers(2, size // 2))
        y = np.cumsum(rng.standard_normal(size)) if rng.random() < 0.5 else rng.integers(-3, 4, size).astype(float)
        p = partition(y, n)
        span = 0 if p.degenerate else p.last_crossing - p.first_crossing
        conserved += int(p.lengths.sum()) == span
        if len(p):
            pdf = cluster_pdf(cluster_histogram(p), n)
            norm_err = max(norm_err, abs(float(pdf.prob.sum()) - 1.0))
            r = mdi(entropy_curve(pdf))
            split_exact &= r.I == r.I_power + r.I_linear
    # calibration of the paired test under the null
    pvals = np.array([paired_t_test(rng.standard_normal(30)).p_value for _ in range(10_000)])
    rate = float(np.mean(pvals < 0.05))
    # determinism: every preset, written twice, byte for byte
    cfg = load_presets(scale=1 / 64, n_seeds=2)
    run_sweep(cfg, tmp_path / "a")
    run_sweep(cfg, tmp_path / "b")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    same = names == sorted(p.name for p in (tmp_path / "b").iterdir()) and all(
        (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in names
    )
    ok = conserved == 1000 and norm_err <= 1e-12 and split_exact and 0.04 <= rate <= 0.06 and same
    detail = (
        f"conservation {conserved}/1000; normalisation error {norm_err:.1e}; split exact {split_exact}; "
        f"null rejection rate {rate:.4f}; double sweep of {len(cfg.selected)} presets identical {same}"
    )
    assert verdict(9, ok, detail)
