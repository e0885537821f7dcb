"""Paired t-test of entropy curves against a benchmark."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from ._errors import DataError
from .entropy import EntropyCurve

__all__ = [
    "PairedSample",
    "TestResult",
    "betainc_reg",
    "student_t_sf",
    "align_curves",
    "paired_t_test",
    "ttest_table",
]

CurveLike = Union[EntropyCurve, Iterable[EntropyCurve]]


@dataclass(frozen=True)
class PairedSample:
    a: np.ndarray
    b: np.ndarray
    keys: list[tuple[int, int]]
    dropped: int = 0

    def __post_init__(self):
        if self.a.shape != self.b.shape or len(self.keys) != self.a.size:
            raise DataError("paired vectors and keys must have equal lengths")

    @property
    def diff(self) -> np.ndarray:
        return self.a - self.b

    def __len__(self):
        return int(self.a.size)


@dataclass(frozen=True)
class TestResult:
    t_stat: float
    p_value: float
    dof: int
    n_pairs: int

    __test__ = False  # not a pytest class

    @property
    def reject_at_5pct(self) -> bool:
        return self.p_value < 0.05


# ------------------------------------------------------------------ #
# Student-t tail through the regularised incomplete beta function
# ------------------------------------------------------------------ #
def _betacf(a: float, b: float, x: float, eps: float = 1e-16, max_iter: int = 10_000) -> float:
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc_reg(a: float, b: float, x: float, xc: float | None = None) -> float:
    """Regularised incomplete beta function I_x(a, b).

    ``xc`` optionally supplies ``1 - x`` computed without cancellation.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if xc is None:
        xc = 1.0 - x
    if x == 0.0 or xc == 0.0:
        return 0.0 if x == 0.0 else 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(xc)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, xc) / b


def student_t_sf(t: float, dof: float, two_sided: bool = True) -> float:
    """Tail probability of Student's t with ``dof`` degrees of freedom."""
    if math.isinf(t):
        tail2 = 0.0
    else:
        t2 = t * t
        # P(|T| > |t|) = I_x(dof/2, 1/2) with x = dof / (dof + t^2)
        tail2 = betainc_reg(0.5 * dof, 0.5, dof / (dof + t2), t2 / (dof + t2))
    if two_sided:
        return min(1.0, tail2)
    return 0.5 * tail2 if t > 0 else 1.0 - 0.5 * tail2


# ------------------------------------------------------------------ #
def _as_points(curves: CurveLike) -> dict[tuple[int, int], float]:
    if isinstance(curves, EntropyCurve):
        curves = [curves]
    points: dict[tuple[int, int], float] = {}
    for c in curves:
        n = -1 if c.n is None else int(c.n)
        for tau, s in zip(c.tau.tolist(), c.S.tolist()):
            points[(int(tau), n)] = s
    return points


def align_curves(x: CurveLike, ref: CurveLike) -> PairedSample:
    """Pair entropy values at the ``(tau, n)`` coordinates both sides observed.

    ``x`` and ``ref`` may each be one curve or a collection of curves over
    several windows. Coordinates seen on one side only are dropped; their
    number is recorded in ``dropped``.
    """
    px, pr = _as_points(x), _as_points(ref)
    if not px or not pr:
        raise DataError("cannot align an empty curve")
    keys = sorted(px.keys() & pr.keys(), key=lambda k: (k[1], k[0]))
    if not keys:
        raise DataError("curves share no (tau, n) coordinate")
    dropped = len(px) + len(pr) - 2 * len(keys)
    a = np.array([px[k] for k in keys])
    b = np.array([pr[k] for k in keys])
    return PairedSample(a, b, keys, dropped)


def paired_t_test(sample: PairedSample | Sequence[float]) -> TestResult:
    """Two-sided paired t-test of zero mean difference.

    ``sample`` is a :class:`PairedSample` or the vector of differences.
    When the differences have zero spread, ``p`` is 1 for a zero mean and
    0 otherwise.
    """
    d = sample.diff if isinstance(sample, PairedSample) else np.asarray(sample, dtype=float)
    k = d.size
    if k < 2:
        raise DataError(f"need at least 2 pairs, have {k}")
    mean = float(np.mean(d))
    sd = float(np.std(d, ddof=1))
    dof = k - 1
    if sd == 0.0:
        if mean == 0.0:
            return TestResult(0.0, 1.0, dof, k)
        return TestResult(math.copysign(math.inf, mean), 0.0, dof, k)
    t = mean * math.sqrt(k) / sd
    return TestResult(t, student_t_sf(t, dof), dof, k)


def ttest_table(
    curves: Mapping[tuple[int, str], CurveLike],
    ref: Mapping[int, CurveLike],
) -> dict[tuple[int, str], TestResult]:
    """Test every ``(horizon, label)`` entry against the benchmark for that horizon."""
    missing = sorted({m for m, _ in curves} - set(ref))
    if missing:
        raise DataError(f"no benchmark for horizons {missing}")
    return {key: paired_t_test(align_curves(c, ref[key[0]])) for key, c in curves.items()}
