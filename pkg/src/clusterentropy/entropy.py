"""
Cluster-length distribution, entropy curve and Market Dynamic Index.

The entropy at cluster length ``tau`` is the surprisal ``-ln P(tau, n)``
of the empirical cluster-length distribution. Its sum over the observed
lengths is the Market Dynamic Index ``I(n)``, split at ``tau = n`` into a
power-law part (``tau < n``) and a linear, excess-entropy part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from ._errors import DataError, ParameterError

__all__ = [
    "ClusterPdf",
    "EntropyCurve",
    "MdiResult",
    "PowerLawFit",
    "cluster_pdf",
    "entropy_curve",
    "mdi",
    "fit_power_law",
    "median_curve",
    "log_binned",
]


@dataclass(frozen=True)
class ClusterPdf:
    tau: np.ndarray
    prob: np.ndarray
    counts: np.ndarray
    n: int | None = None

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.tau.tolist(), self.prob.tolist()))


@dataclass(frozen=True)
class EntropyCurve:
    """``S(tau, n)`` on the observed support of one (window, horizon) pair."""

    tau: np.ndarray
    S: np.ndarray
    n: int | None = None
    horizon: int | None = None

    def __len__(self):
        return int(self.tau.size)

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.tau.tolist(), self.S.tolist()))


class MdiResult(NamedTuple):
    I: float
    I_power: float
    I_linear: float


class PowerLawFit(NamedTuple):
    D: float
    H: float


def cluster_pdf(hist: Mapping[int, int], n: int | None = None) -> ClusterPdf:
    """Empirical probability of each observed cluster length."""
    if not hist:
        raise DataError("cannot build a distribution from an empty histogram")
    tau = np.array(sorted(hist), dtype=np.int64)
    counts = np.array([hist[t] for t in tau], dtype=np.int64)
    if np.any(counts <= 0):
        raise DataError("histogram counts must be positive")
    prob = counts / counts.sum()
    return ClusterPdf(tau=tau, prob=prob, counts=counts, n=n)


def entropy_curve(pdf: ClusterPdf, horizon: int | None = None) -> EntropyCurve:
    # ln(total / count) rather than -ln(prob): the ratio is an exact integer
    # for equal counts, so a uniform law gives exactly ln k and a single
    # length gives exactly 0
    S = np.log(pdf.total / pdf.counts)
    return EntropyCurve(tau=pdf.tau.copy(), S=S, n=pdf.n, horizon=horizon)


def mdi(curve: EntropyCurve, n: int | None = None) -> MdiResult:
    """Market Dynamic Index of one entropy curve.

    Sums ``S`` over the observed lengths; lengths below the window ``n``
    form the power-law part, the rest the linear part. The two parts are
    accumulated separately and ``I`` is their sum.
    """
    if len(curve) == 0:
        raise DataError("empty entropy curve")
    n = curve.n if n is None else n
    if n is None:
        raise ParameterError("window n is required to split the index")
    low = curve.tau < n
    i_pow = float(np.sum(curve.S[low]))
    i_lin = float(np.sum(curve.S[~low]))
    return MdiResult(i_pow + i_lin, i_pow, i_lin)


def _poisson_loglinear(x: np.ndarray, counts: np.ndarray, max_iter: int = 100) -> tuple[float, float]:
    """Poisson regression ``log E[count] = a + b x`` by iteratively reweighted least squares."""
    X = np.column_stack([np.ones_like(x), x])
    beta = np.array([np.log(max(counts.mean(), 1e-12)), 0.0])

    def deviance(b):
        mu = np.exp(X @ b)
        pos = counts > 0
        return 2.0 * (np.sum(counts[pos] * np.log(counts[pos] / mu[pos])) - np.sum(counts - mu))

    dev = deviance(beta)
    for _ in range(max_iter):
        eta = X @ beta
        mu = np.exp(eta)
        z = eta + (counts - mu) / mu
        step = np.linalg.solve(X.T @ (mu[:, None] * X), X.T @ (mu * z)) - beta
        # step halving keeps the deviance monotone
        for _ in range(30):
            trial = beta + step
            new_dev = deviance(trial)
            if np.isfinite(new_dev) and new_dev <= dev + 1e-12 * abs(dev):
                break
            step = step / 2.0
        beta, converged = trial, abs(dev - new_dev) <= 1e-13 * (abs(new_dev) + 1e-300)
        dev = new_dev
        if converged or np.max(np.abs(step)) < 1e-14:
            break
    return float(beta[0]), float(beta[1])


def fit_power_law(
    pdf: ClusterPdf,
    tau_min: int = 5,
    tau_max: int | None = None,
    method: str = "poisson",
) -> PowerLawFit:
    """Fit ``P(tau) ~ tau^-D`` on unit bins ``tau_min..tau_max`` below the window.

    ``tau_max`` defaults to ``n // 5``: close to ``n`` the exponential cut-off
    bends the distribution away from the power law.

    ``method="poisson"`` regresses the counts of *every* length in the region,
    zeros included, with a log link (iteratively reweighted least squares on
    ``ln P``). ``method="wls"`` regresses ``ln P`` of the observed lengths only,
    weighted by their counts; it is exact on noiseless input but biased toward
    small ``D`` when the tail is sparse, since empty bins cannot enter.

    Returns ``D`` and the Hurst exponent ``H = 2 - D``.
    """
    if tau_max is None:
        if pdf.n is None:
            raise ParameterError("tau_max is required when the pdf carries no window")
        tau_max = pdf.n // 5
    if pdf.n is not None:
        tau_max = min(tau_max, pdf.n - 1)
    if tau_max - tau_min + 1 < 5:
        raise DataError(f"fit region {tau_min}..{tau_max} spans fewer than 5 lengths")
    if method == "poisson":
        taus = np.arange(tau_min, tau_max + 1)
        lookup = dict(zip(pdf.tau.tolist(), pdf.counts.tolist()))
        counts = np.array([lookup.get(t, 0) for t in taus.tolist()], dtype=float)
        if np.count_nonzero(counts) < 5:
            raise DataError("need >= 5 observed lengths in the fit region")
        _, slope = _poisson_loglinear(np.log(taus), counts)
    elif method == "wls":
        mask = (pdf.tau >= tau_min) & (pdf.tau <= tau_max)
        if mask.sum() < 5:
            raise DataError(f"need >= 5 distinct lengths in the fit region, have {int(mask.sum())}")
        x = np.log(pdf.tau[mask].astype(float))
        y = np.log(pdf.prob[mask])
        w = pdf.counts[mask].astype(float)
        slope, _ = np.polyfit(x, y, 1, w=np.sqrt(w))
    else:
        raise ParameterError(f"unknown fit method {method!r}")
    D = -float(slope)
    return PowerLawFit(D, 2.0 - D)


def median_curve(curves: Iterable[EntropyCurve], min_fraction: float = 0.5) -> EntropyCurve:
    """Pointwise ensemble median of entropy curves sharing ``n`` and horizon.

    A length enters the result when it is observed in at least
    ``min_fraction`` of the members; the median runs over those members.
    """
    curves = list(curves)
    if not curves:
        raise DataError("no curves to combine")
    taus = np.unique(np.concatenate([c.tau for c in curves]))
    stack = np.full((len(curves), taus.size), np.nan)
    for i, c in enumerate(curves):
        stack[i, np.searchsorted(taus, c.tau)] = c.S
    present = np.sum(~np.isnan(stack), axis=0)
    keep = present >= max(1, int(np.ceil(min_fraction * len(curves))))
    S = np.nanmedian(stack[:, keep], axis=0)
    return EntropyCurve(tau=taus[keep], S=S, n=curves[0].n, horizon=curves[0].horizon)


def log_binned(pdf: ClusterPdf, bins_per_decade: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Log-binned density for plotting. Not used for the index."""
    edges = np.unique(
        np.floor(
            np.logspace(0, np.log10(pdf.tau.max() + 1), bins_per_decade * 6 + 1)
        ).astype(int)
    )
    edges = np.append(edges, edges[-1] + 1) if edges[-1] <= pdf.tau.max() else edges
    mass, _ = np.histogram(pdf.tau, bins=edges, weights=pdf.prob)
    width = np.diff(edges)
    centers = np.sqrt(edges[:-1] * np.maximum(edges[1:] - 1, edges[:-1]))
    keep = mass > 0
    return centers[keep], (mass / width)[keep]
