"""
Seeded generators for the stochastic benchmark processes.

Three families are covered:

* geometric Brownian motion, simulated with the exact log-normal step;
* fractional Brownian motion, the cumulative sum of fractional Gaussian
  noise drawn by circulant embedding (Durbin-Levinson fallback);
* ARFIMA(p, d, q) noise, built as a truncated MA(inf) fractional
  integration followed by an ARMA filter.

Every generator is a pure function of its parameter object: the RNG is
created locally from ``seed`` so repeated calls give bit-identical output.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import signal

from ._errors import ParameterError

__all__ = [
    "GbmParams",
    "FbmParams",
    "ArfimaParams",
    "gen_gbm",
    "gen_fbm",
    "fgn",
    "fgn_autocovariance",
    "frac_diff_coeffs",
    "gen_arfima",
    "integrate",
    "h_from_d",
    "d_from_h",
    "periodogram_slope",
    "ar_is_stationary",
]

log = logging.getLogger(__name__)


# ------------------------------------------------------------------ #
# parameter sets
# ------------------------------------------------------------------ #
@dataclass(frozen=True)
class GbmParams:
    mu: float = 0.0
    sigma: float = 0.0
    x0: float = 1.0
    n_steps: int = 1024
    seed: int | None = None

    def __post_init__(self):
        if not self.x0 > 0:
            raise ParameterError(f"x0 must be positive, got {self.x0}")
        if not self.sigma >= 0:
            raise ParameterError(f"sigma must be non-negative, got {self.sigma}")
        if self.n_steps < 2:
            raise ParameterError(f"n_steps must be >= 2, got {self.n_steps}")


@dataclass(frozen=True)
class FbmParams:
    hurst: float = 0.5
    n_steps: int = 1024
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.n_steps < 2:
            raise ParameterError(f"n_steps must be >= 2, got {self.n_steps}")


@dataclass(frozen=True)
class ArfimaParams:
    """ARFIMA(p, d, q) parameters.

    ``phi`` holds the AR coefficients of ``1 - phi_1 L - ... - phi_p L^p`` and
    ``theta`` the MA coefficients of ``1 + theta_1 L + ... + theta_q L^q``.
    With ``ar_convention="plus"`` the AR polynomial is read as
    ``1 + phi_1 L + ... + phi_p L^p`` instead.
    """

    d: float = 0.0
    phi: tuple[float, ...] = ()
    theta: tuple[float, ...] = ()
    sigma_eps: float = 1.0
    mu: float = 0.0
    n_steps: int = 1024
    seed: int | None = None
    truncation_k: int = 10_000
    ar_convention: Literal["minus", "plus"] = "minus"

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        object.__setattr__(self, "theta", tuple(float(v) for v in self.theta))
        if not -0.5 < self.d < 0.5:
            raise ParameterError(f"d must lie in (-0.5, 0.5), got {self.d}")
        if self.truncation_k < 1:
            raise ParameterError("truncation_k must be >= 1")
        if self.sigma_eps < 0:
            raise ParameterError("sigma_eps must be non-negative")
        if self.n_steps < 2:
            raise ParameterError(f"n_steps must be >= 2, got {self.n_steps}")
        if self.ar_convention not in ("minus", "plus"):
            raise ParameterError(f"unknown ar_convention {self.ar_convention!r}")
        if not ar_is_stationary(self.ar_coeffs):
            raise ParameterError(
                f"AR polynomial with phi={self.phi} has a root on or inside the unit circle"
            )

    @property
    def ar_coeffs(self) -> tuple[float, ...]:
        """AR coefficients in the ``1 - sum phi_i L^i`` form."""
        if self.ar_convention == "plus":
            return tuple(-v for v in self.phi)
        return self.phi

    @property
    def p(self) -> int:
        return len(self.phi)

    @property
    def q(self) -> int:
        return len(self.theta)

    @property
    def burn_in(self) -> int:
        return max(self.truncation_k, 10 * self.p)


def ar_is_stationary(phi: Sequence[float]) -> bool:
    """True when all roots of ``1 - sum phi_i z^i`` lie strictly outside the unit circle."""
    phi = np.asarray(phi, dtype=float)
    if phi.size == 0 or not np.any(phi):
        return True
    # roots of 1 - phi_1 z - ... - phi_p z^p; np.roots wants highest power first
    coeffs = np.concatenate([-phi[::-1], [1.0]])
    coeffs = np.trim_zeros(coeffs, "f")
    roots = np.roots(coeffs)
    return bool(np.all(np.abs(roots) > 1.0 + 1e-10))


# ------------------------------------------------------------------ #
# GBM
# ------------------------------------------------------------------ #
def gen_gbm(params: GbmParams) -> np.ndarray:
    """Geometric Brownian motion with unit time step.

    Uses the exact solution ``X_{t+1} = X_t exp((mu - sigma^2/2) + sigma Z_t)``,
    so there is no discretisation bias. ``X_0 = x0``.
    """
    rng = np.random.default_rng(params.seed)
    z = rng.standard_normal(params.n_steps - 1)
    log_incr = (params.mu - 0.5 * params.sigma**2) + params.sigma * z
    log_path = np.empty(params.n_steps)
    log_path[0] = 0.0
    np.cumsum(log_incr, out=log_path[1:])
    return params.x0 * np.exp(log_path)


# ------------------------------------------------------------------ #
# FBM
# ------------------------------------------------------------------ #
def fgn_autocovariance(hurst: float, lags) -> np.ndarray:
    """Autocovariance of unit-variance fractional Gaussian noise at integer ``lags``."""
    k = np.abs(np.asarray(lags, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2.0 * k**h2 + np.abs(k - 1) ** h2)


def _circulant_eigenvalues(hurst: float, m: int) -> np.ndarray:
    gamma = fgn_autocovariance(hurst, np.arange(m + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    return np.fft.fft(row).real


def _durbin_levinson(gamma: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Exact Gaussian sample with autocovariance ``gamma`` from white noise ``z``. O(m^2)."""
    m = z.size
    x = np.empty(m)
    phi = np.zeros(m)
    v = gamma[0]
    x[0] = np.sqrt(v) * z[0]
    for k in range(1, m):
        prev = phi[: k - 1].copy()
        a = (gamma[k] - prev @ gamma[k - 1 : 0 : -1]) / v
        phi[: k - 1] = prev - a * prev[::-1]
        phi[k - 1] = a
        v *= 1.0 - a * a
        x[k] = phi[:k] @ x[k - 1 :: -1] + np.sqrt(v) * z[k]
    return x


def fgn(
    hurst: float,
    m: int,
    rng: np.random.Generator,
    method: Literal["auto", "circulant", "hosking"] = "auto",
) -> tuple[np.ndarray, str]:
    """Draw ``m`` samples of unit-variance fractional Gaussian noise.

    Returns
    -------
    noise : ndarray
    method : str
        ``"circulant"`` or ``"hosking"``, whichever path produced the sample.
    """
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    if m < 1:
        return np.empty(0), "circulant"
    if method in ("auto", "circulant") and m >= 2:
        lam = _circulant_eigenvalues(hurst, m)
        # FFT round-off may leave tiny negative values on a PSD embedding
        tol = 1e-10 * lam.max()
        if lam.min() >= -tol:
            lam = np.clip(lam, 0.0, None)
            size = lam.size
            v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            y = np.fft.fft(np.sqrt(lam / size) * v)
            return y.real[:m].copy(), "circulant"
        if method == "circulant":
            raise ParameterError("circulant embedding is not positive semi-definite")
        log.warning("circulant embedding failed for H=%g, m=%d; using Hosking recursion", hurst, m)
    gamma = fgn_autocovariance(hurst, np.arange(m))
    return _durbin_levinson(gamma, rng.standard_normal(m)), "hosking"


def gen_fbm(params: FbmParams, return_method: bool = False):
    """Fractional Brownian motion path of length ``n_steps`` with ``B_H(0) = 0``.

    The path is the running sum of ``n_steps - 1`` fGn increments. With
    ``return_method=True`` the synthesis path (``"circulant"`` or
    ``"hosking"``) is returned alongside the series.
    """
    rng = np.random.default_rng(params.seed)
    noise, method = fgn(params.hurst, params.n_steps - 1, rng)
    path = np.empty(params.n_steps)
    path[0] = 0.0
    np.cumsum(noise, out=path[1:])
    if return_method:
        return path, method
    return path


# ------------------------------------------------------------------ #
# ARFIMA
# ------------------------------------------------------------------ #
def frac_diff_coeffs(d: float, K: int) -> np.ndarray:
    """Coefficients ``pi_0..pi_K`` of ``(1 - L)^d``.

    ``pi_0 = 1`` and ``pi_k = pi_{k-1} (k - 1 - d) / k``, which equals
    ``Gamma(k - d) / (Gamma(-d) Gamma(k + 1))`` without overflow.
    Pass ``-d`` to get the fractional integration (MA(inf)) weights.
    """
    if not abs(d) < 0.5:
        raise ParameterError(f"|d| must be < 0.5, got {d}")
    if K < 0:
        raise ParameterError("K must be non-negative")
    k = np.arange(1, K + 1, dtype=float)
    out = np.empty(K + 1)
    out[0] = 1.0
    out[1:] = np.cumprod((k - 1.0 - d) / k)
    return out


def gen_arfima(params: ArfimaParams) -> np.ndarray:
    """Stationary ARFIMA(p, d, q) noise of length ``n_steps``.

    Innovations are fractionally integrated with ``truncation_k`` MA(inf)
    weights, passed through the MA polynomial and then the AR recursion.
    The first ``burn_in`` samples are discarded so every retained sample
    sees the full truncated kernel.
    """
    rng = np.random.default_rng(params.seed)
    burn = params.burn_in
    total = params.n_steps + burn
    eps = params.sigma_eps * rng.standard_normal(total)
    if params.d != 0.0:
        psi = frac_diff_coeffs(-params.d, params.truncation_k)
        x = signal.fftconvolve(eps, psi)[:total]
    else:
        x = eps
    b = np.concatenate([[1.0], params.theta])
    a = np.concatenate([[1.0], -np.asarray(params.ar_coeffs, dtype=float)])
    if b.size > 1 or a.size > 1:
        x = signal.lfilter(b, a, x)
    return params.mu + x[burn:]


# ------------------------------------------------------------------ #
# helpers
# ------------------------------------------------------------------ #
def integrate(series) -> np.ndarray:
    """Running sum; turns increments into a walk-like profile."""
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise ParameterError("cannot integrate an empty series")
    return np.cumsum(series)


def h_from_d(d: float) -> float:
    if not -0.5 < d < 0.5:
        raise ParameterError(f"d must lie in (-0.5, 0.5), got {d}")
    return d + 0.5


def d_from_h(hurst: float) -> float:
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    return hurst - 0.5


def periodogram_slope(series, fit_range: tuple[float, float] = (0.0, 0.1)) -> float:
    """Least-squares slope of log-periodogram against log-frequency.

    Frequencies are in cycles per sample, so the Nyquist frequency is 0.5.
    Only frequencies ``f`` with ``fit_range[0] < f <= fit_range[1]`` enter
    the fit.
    """
    x = np.asarray(series, dtype=float)
    if x.size < 1024:
        raise ParameterError(f"series too short for a spectral slope ({x.size} < 1024)")
    lo, hi = fit_range
    if not (0.0 <= lo < hi <= 0.5):
        raise ParameterError(f"fit_range must satisfy 0 <= lo < hi <= 0.5, got {fit_range}")
    x = x - x.mean()
    freqs = np.fft.rfftfreq(x.size)
    power = np.abs(np.fft.rfft(x)) ** 2 / x.size
    mask = (freqs > lo) & (freqs <= hi) & (freqs > 0) & (power > 0)
    if mask.sum() < 3:
        raise ParameterError(f"fit_range {fit_range} holds fewer than 3 frequencies")
    slope, _ = np.polyfit(np.log(freqs[mask]), np.log(power[mask]), 1)
    return float(slope)
