"""Numerically stable exact binomial tail probabilities.

Tail sums are accumulated outward from the dominant probability-mass term,
so values deep in a tail keep full relative precision instead of being lost
to cancellation against 1.  This module is the single special-function
dependency of every bound in the package.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = ["BinomialParams", "log_pmf", "cdf", "sf"]

# Terms this small relative to the running sum cannot move the result at
# double precision; the mass is unimodal, so everything beyond is smaller.
_NEGLIGIBLE = 1e-19


@dataclass(frozen=True)
class BinomialParams:
    """Trial count ``n`` and success probability ``p`` of a binomial law."""

    n: int
    p: float

    def __post_init__(self) -> None:
        try:
            n = operator.index(self.n)
        except TypeError:
            raise ValueError(f"n must be a positive integer, got {self.n!r}") from None
        if n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        p = float(self.p)
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)


def log_pmf(params: BinomialParams, k: int) -> float:
    """Natural log of P(Bin(n, p) = k), with exact -inf for zero mass.

    Follows the conventions 0*log(0) = 0, so the degenerate p in {0, 1}
    cases return 0.0 (probability one) or -inf rather than touching log(0)
    arithmetic.

    Raises
    ------
    ValueError
        If k lies outside [0, n].
    """
    k = operator.index(k)
    n, p = params.n, params.p
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    if p == 0.0:
        return 0.0 if k == 0 else -math.inf
    if p == 1.0:
        return 0.0 if k == n else -math.inf
    return math.log(math.comb(n, k)) + k * math.log(p) + (n - k) * math.log1p(-p)


def cdf(params: BinomialParams, k: int) -> float:
    """P(Bin(n, p) <= k), saturating outside the support.

    Out-of-range k is accepted for caller convenience: k < 0 returns 0 and
    k >= n returns 1.  Interior values are computed by streaming summation
    anchored at the largest mass term (see ``_mass_on_range``), accurate to
    better than 1e-12 relative error for n up to 10_000.
    """
    k = operator.index(k)
    n, p = params.n, params.p
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    return _mass_on_range(n, p, 0, k)


def sf(params: BinomialParams, t: int) -> float:
    """P(Bin(n, p) >= t), saturating outside the support.

    Computed by direct summation over [t, n] rather than as 1 - cdf(t - 1),
    so tiny survival probabilities (down to the smallest normal double)
    retain relative precision.
    """
    t = operator.index(t)
    n, p = params.n, params.p
    if t <= 0:
        return 1.0
    if t > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    return _mass_on_range(n, p, t, n)


def _pmf_exact(n: int, p: float, j: int) -> float:
    """Correctly rounded P(Bin(n, p) = j), treating p as its exact binary value.

    Exact integer/rational arithmetic keeps the anchor term at 1/2 ulp, which
    is what lets the streamed tail sums hold 1e-12 relative error at large n
    (a log-gamma anchor alone drifts past that once n reaches the thousands).
    """
    pf = Fraction(p)
    return float(math.comb(n, j) * pf**j * (1 - pf) ** (n - j))


@lru_cache(maxsize=1 << 16)
def _mass_on_range(n: int, p: float, lo: int, hi: int) -> float:
    """Sum of binomial mass over lo <= j <= hi for 0 < p < 1, 0 <= lo <= hi < n+1.

    The sum is anchored at the largest term in the range and accumulated
    outward through the term-ratio recurrence; math.fsum makes the final
    reduction exact.
    """
    mode = math.floor((n + 1) * p)
    j0 = min(max(lo, mode), hi)
    anchor = _pmf_exact(n, p, j0)
    if anchor == 0.0:
        # Largest term below the smallest subnormal: the whole range is 0
        # at double precision.
        return 0.0
    odds = p / (1.0 - p)
    rel = [1.0]
    r = 1.0
    for j in range(j0, lo, -1):
        r *= j / ((n - j + 1) * odds)
        if r < _NEGLIGIBLE:
            break
        rel.append(r)
    r = 1.0
    for j in range(j0, hi):
        r *= (n - j) * odds / (j + 1)
        if r < _NEGLIGIBLE:
            break
        rel.append(r)
    return min(1.0, anchor * math.fsum(rel))
