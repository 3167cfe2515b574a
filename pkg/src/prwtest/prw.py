"""The PRW binomial-tail bound and its super-uniform p-value.

For i.i.d. losses in [0, 1] with unknown mean, the upper/lower tail of the
sample sum is bounded by an explicit multiple of a binomial tail.  Evaluated
at a grid-snapped ceiling of the observed empirical risk, the lower-tail
bound yields a step function whose value at the (capped) empirical risk is a
valid p-value for testing ``H0: mean > alpha``.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from functools import lru_cache

from .binomial import BinomialParams, cdf, sf

__all__ = [
    "TestSpec",
    "GBoundContext",
    "gamma_r",
    "ceil_scaled",
    "upper_tail_bound",
    "lower_tail_bound",
    "g",
    "g_inverse",
    "prw_pvalue",
]

# Relative slack under which n*t is treated as the integer it visibly is.
# Empirical risks j/n that went through float arithmetic can land a few ulps
# off the grid; a raw ceiling would then jump a whole step.
SNAP_RTOL = 1e-9


def _check_positive_int(value, name: str) -> int:
    try:
        v = operator.index(value)
    except TypeError:
        raise ValueError(f"{name} must be a positive integer, got {value!r}") from None
    if v < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return v


def _check_open_unit(value, name: str) -> float:
    v = float(value)
    if math.isnan(v) or not 0.0 < v < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value!r}")
    return v


@dataclass(frozen=True)
class TestSpec:
    """Context of the one-sided test ``H0: mean > alpha``: sample size and threshold."""

    n: int
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", _check_positive_int(self.n, "n"))
        object.__setattr__(self, "alpha", _check_open_unit(self.alpha, "alpha"))


@dataclass(frozen=True)
class GBoundContext:
    """Evaluation context of the step bound for a fixed (n, mean).

    ``gamma`` is the smallest positive integer >= n*mean and
    ``t_max = (gamma - 1)/n`` is the right endpoint of the bound's domain;
    the bound is only defined left of the binomial mean.
    """

    n: int
    mean: float
    gamma: int
    t_max: float

    def __post_init__(self) -> None:
        n = _check_positive_int(self.n, "n")
        mean = _check_open_unit(self.mean, "mean")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mean", mean)
        if self.gamma != gamma_r(n, mean):
            raise ValueError(
                f"inconsistent context: gamma={self.gamma} but gamma_r({n}, {mean}) "
                f"= {gamma_r(n, mean)}"
            )
        if self.t_max != (self.gamma - 1) / n:
            raise ValueError("inconsistent context: t_max must equal (gamma-1)/n")

    @classmethod
    def from_mean(cls, n: int, mean: float) -> "GBoundContext":
        n = _check_positive_int(n, "n")
        mean = _check_open_unit(mean, "mean")
        gamma = gamma_r(n, mean)
        return cls(n=n, mean=mean, gamma=gamma, t_max=(gamma - 1) / n)


def gamma_r(n: int, mean: float) -> int:
    """Smallest positive integer r with r >= n*mean; always in [1, n].

    Equals n*mean itself when that product is an integer (up to the snap
    tolerance), the ceiling otherwise.
    """
    n = _check_positive_int(n, "n")
    mean = _check_open_unit(mean, "mean")
    return max(1, ceil_scaled(n, mean))


def ceil_scaled(n: int, t: float) -> int:
    """Ceiling of n*t with an integer-snap rule.

    If n*t sits within SNAP_RTOL (relative) of an integer it is treated as
    that integer; otherwise the true ceiling is returned.
    """
    n = _check_positive_int(n, "n")
    t = float(t)
    if math.isnan(t) or not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    nt = n * t
    nearest = round(nt)
    if abs(nt - nearest) <= SNAP_RTOL * max(1.0, nt):
        return int(nearest)
    return math.ceil(nt)


def upper_tail_bound(n: int, p: float, t: int) -> float:
    """Bound on P(sum of n i.i.d. [0,1] variables with mean p >= t).

    Returns ``(t - t*p)/(t - n*p) * P(Bin(n, p) >= t)`` for integer t with
    n*p < t <= n; t = n is allowed (the leading factor is then exactly 1).
    The value may exceed 1; callers interpreting it as a probability bound
    clamp it themselves.
    """
    n = _check_positive_int(n, "n")
    p = _check_open_unit(p, "p")
    t = operator.index(t)
    if not n * p < t <= n:
        raise ValueError(f"t must be an integer in (n*p, n] = ({n * p}, {n}], got {t}")
    factor = (t - t * p) / (t - n * p)
    return factor * sf(BinomialParams(n, p), t)


def lower_tail_bound(n: int, mean: float, k: int) -> float:
    """Bound on P(sum of n i.i.d. [0,1] variables with the given mean <= k).

    Returns ``mean*(n - k)/(n*mean - k) * P(Bin(n, mean) <= k)`` for integer
    k in [0, n*mean).  Mirrors ``upper_tail_bound`` under the substitution
    losses -> 1 - losses.
    """
    n = _check_positive_int(n, "n")
    mean = _check_open_unit(mean, "mean")
    k = operator.index(k)
    # k <= gamma - 1 is the integer form of k < n*mean, robust to n*mean
    # landing a few ulps off an integer.
    if not 0 <= k <= gamma_r(n, mean) - 1:
        raise ValueError(f"k must be an integer in [0, n*mean) = [0, {n * mean}), got {k}")
    factor = mean * (n - k) / (n * mean - k)
    return factor * cdf(BinomialParams(n, mean), k)


def g(t: float, ctx: GBoundContext) -> float:
    """Step-function bound on P(empirical risk <= t) for t in [0, t_max].

    Left of the boundary the value is ``lower_tail_bound`` at the snapped
    ceiling of n*t; at the boundary t = t_max itself the value is clamped
    below by 1, which is what makes the capped p-value valid.  g(0) equals
    (1 - mean)**n exactly whenever gamma >= 2.
    """
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise ValueError(f"t must lie in [0, {ctx.t_max}], got {t!r}")
    nt = ctx.n * t
    boundary = ctx.gamma - 1
    if abs(nt - boundary) <= SNAP_RTOL * max(1.0, nt):
        return max(1.0, lower_tail_bound(ctx.n, ctx.mean, boundary))
    if t > ctx.t_max:
        raise ValueError(f"t must lie in [0, {ctx.t_max}], got {t!r}")
    return lower_tail_bound(ctx.n, ctx.mean, ceil_scaled(ctx.n, t))


def g_inverse(delta: float, ctx: GBoundContext) -> float:
    """Largest grid point j/n whose bound value is still <= delta.

    The bound is a left-continuous step function jumping only at the grid
    points {0, 1/n, ..., (gamma-1)/n}, so the scan over those points is
    exact; no root finding is involved.  The boundary point (gamma-1)/n
    never qualifies because its value is clamped to at least 1.  Satisfies
    ``g(g_inverse(delta)) <= delta``.

    Raises
    ------
    ValueError
        If delta < (1 - mean)**n (no grid point qualifies), or when
        gamma = 1 so the domain contains only the boundary point.
    """
    delta = float(delta)
    if math.isnan(delta) or not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    if ctx.gamma == 1:
        raise ValueError(
            "the bound's domain holds only its boundary point, whose value is "
            "at least 1; no delta < 1 is attainable"
        )
    best = -1
    for j in range(ctx.gamma - 1):
        if lower_tail_bound(ctx.n, ctx.mean, j) <= delta:
            best = j
    if best < 0:
        raise ValueError(
            f"delta={delta} is below the smallest attainable bound value "
            f"(1 - mean)**n = {(1.0 - ctx.mean) ** ctx.n}"
        )
    return best / ctx.n


def prw_pvalue(rhat: float, spec: TestSpec, *, clamp: bool = True) -> float:
    """PRW p-value for ``H0: mean > alpha`` given the observed empirical risk.

    Evaluates the step bound at min(rhat, t_max) in the context built from
    (spec.n, spec.alpha) and reports min(1, value).  ``clamp=False`` returns
    the raw bound value, which exceeds 1 in the capped region; useful for
    diagnostics only.
    """
    rhat = float(rhat)
    if math.isnan(rhat) or not 0.0 <= rhat <= 1.0:
        raise ValueError(f"rhat must lie in [0, 1], got {rhat!r}")
    ctx = _context(spec.n, spec.alpha)
    value = g(min(rhat, ctx.t_max), ctx)
    return min(1.0, value) if clamp else value


@lru_cache(maxsize=1 << 12)
def _context(n: int, alpha: float) -> GBoundContext:
    return GBoundContext.from_mean(n, alpha)
