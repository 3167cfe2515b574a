"""Family-wise error rate procedures over ordered families of p-values.

All three procedures consume valid (super-uniform) p-values in a
user-specified a-priori order and are agnostic to which method produced
them.  Ties at the local level count as rejections (``<=``), matching the
super-uniform convention P(p <= delta) <= delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

__all__ = ["FwerPlan", "FwerOutcome", "fixed_sequence", "fallback", "bonferroni"]

_WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FwerPlan:
    """Ordered family of hypotheses: p-values, global level, optional weights.

    Weights are only consumed by the fallback procedure; they must be
    non-negative and sum to 1.
    """

    pvalues: tuple[float, ...]
    delta: float
    weights: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        pvalues = tuple(float(p) for p in self.pvalues)
        if not pvalues:
            raise ValueError("plan must contain at least one hypothesis")
        for i, p in enumerate(pvalues):
            if math.isnan(p) or not 0.0 <= p <= 1.0:
                raise ValueError(f"p-value at position {i} must lie in [0, 1], got {p!r}")
        delta = float(self.delta)
        if math.isnan(delta) or not 0.0 < delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        object.__setattr__(self, "pvalues", pvalues)
        object.__setattr__(self, "delta", delta)
        if self.weights is not None:
            weights = tuple(float(w) for w in self.weights)
            if len(weights) != len(pvalues):
                raise ValueError(
                    f"weights length {len(weights)} != number of hypotheses {len(pvalues)}"
                )
            if any(w < 0.0 or math.isnan(w) for w in weights):
                raise ValueError("weights must be non-negative")
            total = math.fsum(weights)
            if abs(total - 1.0) > _WEIGHT_SUM_TOL:
                raise ValueError(f"weights must sum to 1, got {total!r}")
            object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class FwerOutcome:
    """Per-hypothesis rejection flags and the local level each was tested at."""

    rejected: tuple[bool, ...]
    local_levels: tuple[float, ...]


def fixed_sequence(plan: FwerPlan) -> FwerOutcome:
    """Test hypotheses in order, each at the full level, stopping at the first failure.

    Hypotheses after the first non-rejection are not tested and carry local
    level 0.  Rejections therefore always form a prefix of the given order.
    Weights, if present, are ignored.
    """
    rejected: list[bool] = []
    levels: list[float] = []
    testing = True
    for p in plan.pvalues:
        if testing:
            levels.append(plan.delta)
            if p <= plan.delta:
                rejected.append(True)
            else:
                rejected.append(False)
                testing = False
        else:
            levels.append(0.0)
            rejected.append(False)
    return FwerOutcome(rejected=tuple(rejected), local_levels=tuple(levels))


def fallback(plan: FwerPlan) -> FwerOutcome:
    """Weighted fallback procedure with single-successor level carryover.

    Hypothesis i is tested at ``delta*w_i`` plus, if its predecessor was
    rejected, the predecessor's whole local level.  A non-rejection forfeits
    only that hypothesis's level; later hypotheses still receive their own
    weighted share.
    """
    if plan.weights is None:
        raise ValueError("fallback requires weights")
    rejected: list[bool] = []
    levels: list[float] = []
    carry = 0.0
    for p, w in zip(plan.pvalues, plan.weights):
        level = plan.delta * w + carry
        levels.append(level)
        if p <= level:
            rejected.append(True)
            carry = level
        else:
            rejected.append(False)
            carry = 0.0
    return FwerOutcome(rejected=tuple(rejected), local_levels=tuple(levels))


def bonferroni(plan: FwerPlan) -> FwerOutcome:
    """Reject hypothesis i iff ``p_i <= delta / m``; order plays no role."""
    m = len(plan.pvalues)
    level = plan.delta / m
    rejected = tuple(p <= level for p in plan.pvalues)
    return FwerOutcome(rejected=rejected, local_levels=(level,) * m)
