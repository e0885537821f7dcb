import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clusterentropy import DataError, ParameterError
from clusterentropy.entropy import (
    EntropyCurve,
    cluster_pdf,
    entropy_curve,
    fit_power_law,
    log_binned,
    mdi,
    median_curve,
)
from clusterentropy.partition import cluster_histogram, partition
from clusterentropy.series import FbmParams, gen_fbm

histograms = st.dictionaries(st.integers(1, 10_000), st.integers(1, 10**6), min_size=1, max_size=300)


# ---------------------------------------------------------------- pdf
def test_pdf_single():
    assert cluster_pdf({1: 3}).as_dict() == {1: 1.0}


def test_pdf_two():
    pdf = cluster_pdf({4: 1, 7: 1})
    assert pdf.as_dict() == {4: 0.5, 7: 0.5}
    assert pdf.total == 2


def test_pdf_empty():
    with pytest.raises(DataError):
        cluster_pdf({})


def test_pdf_nonpositive_count():
    with pytest.raises(DataError):
        cluster_pdf({3: 0})


@given(histograms)
def test_pdf_normalised(hist):
    pdf = cluster_pdf(hist)
    assert math.fsum(pdf.prob) == pytest.approx(1.0, abs=1e-12)
    assert np.all(pdf.prob > 0)
    assert pdf.total == sum(hist.values())


# ---------------------------------------------------------------- entropy
def test_entropy_single_length_is_zero():
    c = entropy_curve(cluster_pdf({7: 12}))
    assert c.S.tolist() == [0.0]
    assert math.copysign(1.0, c.S[0]) == 1.0


@pytest.mark.parametrize("k", [1, 2, 3, 7, 10, 97, 1000])
@pytest.mark.parametrize("c", [1, 5])
def test_entropy_uniform_is_log_k(k, c):
    c = entropy_curve(cluster_pdf({t: c for t in range(1, k + 1)}))
    assert np.all(c.S == np.log(k))


def test_entropy_one_over_e():
    # counts chosen so that P(1) = 1/e to twelve digits
    hist = {1: 367879441171, 2: 10**12 - 367879441171}
    assert entropy_curve(cluster_pdf(hist)).S[0] == pytest.approx(1.0, abs=1e-11)


@given(histograms)
def test_entropy_is_surprisal(hist):
    pdf = cluster_pdf(hist)
    c = entropy_curve(pdf, horizon=3)
    assert np.all(c.S >= 0)
    assert np.allclose(c.S, -np.log(pdf.prob), rtol=1e-14, atol=1e-15)
    assert c.horizon == 3 and np.array_equal(c.tau, pdf.tau)


# ---------------------------------------------------------------- index
def test_mdi_single_point():
    assert mdi(EntropyCurve(np.array([1]), np.array([0.0]), n=5)) == (0.0, 0.0, 0.0)


def test_mdi_split():
    r = mdi(EntropyCurve(np.array([2, 13]), np.array([0.7, 1.2]), n=10))
    assert r.I == pytest.approx(1.9) and r.I_power == 0.7 and r.I_linear == 1.2


def test_mdi_boundary_goes_linear():
    r = mdi(EntropyCurve(np.array([9, 10]), np.array([1.0, 2.0]), n=10))
    assert (r.I_power, r.I_linear) == (1.0, 2.0)


def test_mdi_errors():
    with pytest.raises(DataError):
        mdi(EntropyCurve(np.array([], dtype=int), np.array([]), n=3))
    with pytest.raises(ParameterError):
        mdi(EntropyCurve(np.array([1]), np.array([0.0])))


@given(histograms, st.integers(2, 5000))
def test_mdi_additive_exact(hist, n):
    r = mdi(entropy_curve(cluster_pdf(hist, n)))
    assert r.I == r.I_power + r.I_linear
    assert r.I >= 0


# ---------------------------------------------------------------- fit
def _power_counts(D, taus, scale=1e12):
    return {int(t): int(round(scale * t**-D)) for t in taus}


@pytest.mark.parametrize("method", ["poisson", "wls"])
def test_fit_exact_power_law(method):
    pdf = cluster_pdf(_power_counts(1.5, range(1, 51)))
    fit = fit_power_law(pdf, tau_min=1, tau_max=50, method=method)
    assert fit.D == pytest.approx(1.5, abs=1e-6)
    assert fit.H == pytest.approx(0.5, abs=1e-6)


def test_fit_d_h_relation():
    pdf = cluster_pdf(_power_counts(1.2, range(1, 100)))
    fit = fit_power_law(pdf, tau_min=1, tau_max=99)
    assert fit.D + fit.H == pytest.approx(2.0, abs=1e-15)


def test_fit_default_region_uses_window():
    pdf = cluster_pdf(_power_counts(1.5, range(1, 500)), n=200)
    fit = fit_power_law(pdf)  # 5..40
    assert fit.D == pytest.approx(1.5, abs=1e-6)


def test_fit_needs_support():
    with pytest.raises(DataError):
        fit_power_law(cluster_pdf({5: 1, 6: 1, 7: 1}, n=1000))
    with pytest.raises(DataError):
        fit_power_law(cluster_pdf({1: 1}), tau_min=1, tau_max=3)
    with pytest.raises(ParameterError):
        fit_power_law(cluster_pdf({1: 1}))
    with pytest.raises(ParameterError):
        fit_power_law(cluster_pdf(_power_counts(1.5, range(1, 60))), tau_min=1, tau_max=50, method="ols")


def test_fit_poisson_counts_empty_bins():
    # sparse Poisson tail: bins with no cluster still enter as zeros, while
    # the log-log regression can only see the occupied ones
    rng = np.random.default_rng(3)
    taus = np.arange(1, 201)
    d_pois, d_wls = [], []
    for _ in range(50):
        counts = rng.poisson(2000.0 * taus**-2.0)
        pdf = cluster_pdf({int(t): int(c) for t, c in zip(taus, counts) if c > 0})
        d_pois.append(fit_power_law(pdf, tau_min=1, tau_max=200).D)
        d_wls.append(fit_power_law(pdf, tau_min=1, tau_max=200, method="wls").D)
    assert np.median(d_pois) == pytest.approx(2.0, abs=0.02)
    assert np.median(d_wls) < np.median(d_pois) - 0.05


def _fbm_hest(h, seed, n=500, shuffle=False):
    y = gen_fbm(FbmParams(h, 2**17, seed=seed))
    if shuffle:
        inc = np.diff(y)
        np.random.default_rng(seed).shuffle(inc)
        y = np.concatenate([[0.0], np.cumsum(inc)])
    return fit_power_law(cluster_pdf(cluster_histogram(partition(y, n)), n)).H


def test_fit_recovers_h08():
    est = np.median([_fbm_hest(0.8, s) for s in range(10)])
    assert abs(est - 0.8) < 0.1


def test_shuffled_increments_lose_memory():
    est = np.median([_fbm_hest(0.8, s, shuffle=True) for s in range(10)])
    assert abs(est - 0.5) < 0.1


# ---------------------------------------------------------------- curve shape
def test_fbm_curves_power_and_linear_regimes():
    windows = (30, 100, 300)
    curves = {n: [] for n in windows}
    pooled = {n: Counter() for n in windows}
    for s in range(10):
        y = gen_fbm(FbmParams(0.5, 2**17, seed=s))
        for n in windows:
            hist = cluster_histogram(partition(y, n))
            pooled[n].update(hist)
            curves[n].append(entropy_curve(cluster_pdf(hist, n)).as_dict())

    def member_stats(n, tau):
        v = [c[tau] for c in curves[n] if tau in c]
        return np.mean(v), np.std(v, ddof=1)

    # power-law region (tau up to n/5 of the smaller window): the curves
    # coincide within the member spread
    for n1, n2 in [(30, 100), (30, 300), (100, 300)]:
        for tau in range(1, n1 // 5 + 1):
            (m1, s1), (m2, s2) = member_stats(n1, tau), member_stats(n2, tau)
            assert abs(m1 - m2) < 2 * np.hypot(s1, s2)
    # tau >= n: the smaller window lies above (steeper tau/n slope); long
    # clusters are rare at small n, so use the pooled ensemble distribution
    ens = {n: entropy_curve(cluster_pdf(pooled[n], n)).as_dict() for n in windows}
    for n1, n2 in [(30, 100), (100, 300)]:
        common = [t for t in ens[n2] if n2 <= t <= 2 * n2 and t in ens[n1]]
        assert len(common) >= 5
        assert np.mean([ens[n1][t] for t in common]) > np.mean([ens[n2][t] for t in common])


def test_median_curve():
    a = EntropyCurve(np.array([1, 2, 3]), np.array([1.0, 2.0, 3.0]), n=5, horizon=1)
    b = EntropyCurve(np.array([1, 2]), np.array([3.0, 4.0]), n=5, horizon=1)
    c = EntropyCurve(np.array([1, 4]), np.array([5.0, 9.0]), n=5, horizon=1)
    m = median_curve([a, b, c])
    assert m.as_dict() == {1: 3.0, 2: 3.0}
    assert m.n == 5 and m.horizon == 1
    assert median_curve([a, b, c], min_fraction=0.0).as_dict() == {1: 3.0, 2: 3.0, 3: 3.0, 4: 9.0}
    with pytest.raises(DataError):
        median_curve([])


def test_log_binned_mass():
    pdf = cluster_pdf(_power_counts(1.5, range(1, 300), scale=1e6))
    x, dens = log_binned(pdf)
    assert np.all(np.diff(x) > 0) and np.all(dens > 0)
