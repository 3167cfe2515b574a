"""Competitor valid p-values: Bentkus and the tight (KL) Hoeffding bound.

Both test the same one-sided hypothesis ``H0: mean > alpha`` as the PRW
p-value and are assembled here into a side-by-side report for power
comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .binomial import BinomialParams, cdf
from .prw import TestSpec, ceil_scaled, prw_pvalue

__all__ = ["PValueReport", "bentkus_pvalue", "kl_bernoulli", "hoeffding_tight_pvalue", "compare"]


@dataclass(frozen=True)
class PValueReport:
    """All three p-values for one observed empirical risk."""

    rhat: float
    alpha: float
    n: int
    prw: float
    bentkus: float
    hoeffding_tight: float

    def __post_init__(self) -> None:
        for name in ("prw", "bentkus", "hoeffding_tight"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} p-value must lie in [0, 1], got {v!r}")


def bentkus_pvalue(rhat: float, spec: TestSpec, *, clamp: bool = True) -> float:
    """Bentkus p-value ``min(1, e * P(Bin(n, alpha) <= ceil(n*rhat)))``.

    Uses the same integer-snapped ceiling as the PRW p-value, so the two
    step functions jump at identical grid points.  ``clamp=False`` reports
    the raw ``e * cdf`` value for diagnostics.
    """
    rhat = float(rhat)
    if math.isnan(rhat) or not 0.0 <= rhat <= 1.0:
        raise ValueError(f"rhat must lie in [0, 1], got {rhat!r}")
    k = ceil_scaled(spec.n, rhat)
    value = math.e * cdf(BinomialParams(spec.n, spec.alpha), k)
    return min(1.0, value) if clamp else value


def kl_bernoulli(a: float, b: float) -> float:
    """KL divergence between Bernoulli(a) and Bernoulli(b), in nats.

    ``a*log(a/b) + (1-a)*log((1-a)/(1-b))`` with the conventions
    0*log(0/.) = 0 at both endpoints; exactly 0 when a == b.  The
    complementary term goes through log1p so values stay accurate as a
    approaches 0 or 1.
    """
    a = float(a)
    b = float(b)
    if math.isnan(a) or not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a!r}")
    if math.isnan(b) or not 0.0 < b < 1.0:
        raise ValueError(f"b must lie in (0, 1), got {b!r}")
    left = a * math.log(a / b) if a > 0.0 else 0.0
    right = (1.0 - a) * (math.log1p(-a) - math.log1p(-b)) if a < 1.0 else 0.0
    return left + right


def hoeffding_tight_pvalue(rhat: float, spec: TestSpec) -> float:
    """Tight Hoeffding p-value ``exp(-n * KL(min(rhat, alpha) || alpha))``.

    Evaluated at the raw empirical risk, not a grid ceiling, so the curve
    varies smoothly in rhat and equals 1 for every rhat >= alpha.
    """
    rhat = float(rhat)
    if math.isnan(rhat) or not 0.0 <= rhat <= 1.0:
        raise ValueError(f"rhat must lie in [0, 1], got {rhat!r}")
    clipped = min(rhat, spec.alpha)
    return math.exp(-spec.n * kl_bernoulli(clipped, spec.alpha))


def compare(rhat: float, spec: TestSpec) -> PValueReport:
    """Compute all three p-values at one empirical risk, sharing the ceiling."""
    return PValueReport(
        rhat=float(rhat),
        alpha=spec.alpha,
        n=spec.n,
        prw=prw_pvalue(rhat, spec),
        bentkus=bentkus_pvalue(rhat, spec),
        hoeffding_tight=hoeffding_tight_pvalue(rhat, spec),
    )
