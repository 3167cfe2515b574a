"""Seeded Monte Carlo harness for p-value validity and power measurements.

Sampling is fully deterministic given the seed: one numpy ``default_rng``
(PCG64) stream per simulation call, consumed by a single block draw of shape
``(reps, n)``.  Bernoulli losses are uniform-threshold draws, beta losses use
``Generator.beta``, and discrete losses use ``Generator.choice``; changing
any of these would silently invalidate pinned fixtures, so they are part of
the contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .baselines import bentkus_pvalue, hoeffding_tight_pvalue
from .prw import TestSpec, prw_pvalue

__all__ = [
    "LossDistribution",
    "McReport",
    "PVALUE_METHODS",
    "simulate_superuniformity",
    "simulate_power",
]

PVALUE_METHODS = ("prw", "bentkus", "hoeffding-tight")

_MEAN_TOL = 1e-12


def canonical_method(method: str) -> str:
    """Normalize a p-value method id; raise for anything unknown."""
    name = str(method).strip().lower().replace("_", "-")
    if name not in PVALUE_METHODS:
        raise ValueError(f"unknown p-value method {method!r}; choose from {PVALUE_METHODS}")
    return name


def _pvalue_fn(method: str):
    name = canonical_method(method)
    if name == "prw":
        return prw_pvalue
    if name == "bentkus":
        return bentkus_pvalue
    return hoeffding_tight_pvalue


@dataclass(frozen=True)
class LossDistribution:
    """A loss-generating law supported on [0, 1] with known analytic mean."""

    kind: str
    params: tuple
    mean: float

    @classmethod
    def bernoulli(cls, p: float) -> "LossDistribution":
        p = float(p)
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise ValueError(f"bernoulli parameter must lie in [0, 1], got {p!r}")
        return cls(kind="bernoulli", params=(p,), mean=p)

    @classmethod
    def beta(cls, a: float, b: float) -> "LossDistribution":
        a = float(a)
        b = float(b)
        if not (a > 0.0 and b > 0.0):
            raise ValueError(f"beta shape parameters must be positive, got ({a!r}, {b!r})")
        return cls(kind="beta", params=(a, b), mean=a / (a + b))

    @classmethod
    def scaled_discrete(
        cls, support: Sequence[float], probs: Sequence[float]
    ) -> "LossDistribution":
        support = tuple(float(x) for x in support)
        probs = tuple(float(q) for q in probs)
        if not support or len(support) != len(probs):
            raise ValueError("support and probs must be non-empty and equal length")
        if any(math.isnan(x) or not 0.0 <= x <= 1.0 for x in support):
            raise ValueError(f"support must lie within [0, 1], got {support}")
        if any(q < 0.0 or math.isnan(q) for q in probs):
            raise ValueError("probabilities must be non-negative")
        total = math.fsum(probs)
        if abs(total - 1.0) > _MEAN_TOL:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        mean = math.fsum(x * q for x, q in zip(support, probs))
        return cls(kind="scaled-discrete", params=(support, probs), mean=mean)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw losses of the given shape from one generator stream."""
        if self.kind == "bernoulli":
            (p,) = self.params
            return (rng.random(size) < p).astype(np.float64)
        if self.kind == "beta":
            a, b = self.params
            return rng.beta(a, b, size)
        support, probs = self.params
        return rng.choice(np.asarray(support, dtype=np.float64), p=probs, size=size)


@dataclass(frozen=True)
class McReport:
    """Empirical exceedance frequencies P(p <= delta) over a delta grid."""

    delta_grid: tuple[float, ...]
    exceedance: tuple[float, ...]
    stderr: tuple[float, ...]
    reps: int
    seed: int


def _validate_reps(reps: int) -> int:
    reps = int(reps)
    if reps < 1:
        raise ValueError(f"reps must be a positive integer, got {reps!r}")
    return reps


def _sample_pvalues(
    dist: LossDistribution, spec: TestSpec, methods: Sequence[str], reps: int, seed: int
) -> dict[str, np.ndarray]:
    """Per-replication p-values for every method, from one shared loss block."""
    rng = np.random.default_rng(seed)
    losses = dist.sample(rng, (reps, spec.n))
    rhats = losses.mean(axis=1)
    out: dict[str, np.ndarray] = {}
    for method in methods:
        fn = _pvalue_fn(method)
        out[canonical_method(method)] = np.array([fn(r, spec) for r in rhats])
    return out


def simulate_superuniformity(
    dist: LossDistribution,
    spec: TestSpec,
    method: str,
    delta_grid: Sequence[float],
    reps: int,
    seed: int,
) -> McReport:
    """Estimate P(p <= delta) under a true null across a grid of levels.

    Requires ``dist.mean > spec.alpha`` so the null actually holds; anything
    else would measure power, not validity.  Standard errors are the
    binomial plug-in ``sqrt(phat*(1-phat)/reps)``.
    """
    reps = _validate_reps(reps)
    if not dist.mean > spec.alpha:
        raise ValueError(
            f"null hypothesis must hold: dist mean {dist.mean} must exceed alpha {spec.alpha}"
        )
    grid = tuple(float(d) for d in delta_grid)
    if not grid:
        raise ValueError("delta_grid must be non-empty")
    for d in grid:
        if math.isnan(d) or not 0.0 < d < 1.0:
            raise ValueError(f"delta values must lie in (0, 1), got {d!r}")
    pvals = _sample_pvalues(dist, spec, [method], reps, seed)[canonical_method(method)]
    exceedance = tuple(float(np.mean(pvals <= d)) for d in grid)
    stderr = tuple(math.sqrt(e * (1.0 - e) / reps) for e in exceedance)
    return McReport(
        delta_grid=grid, exceedance=exceedance, stderr=stderr, reps=reps, seed=int(seed)
    )


def simulate_power(
    dist: LossDistribution,
    spec: TestSpec,
    methods: Sequence[str],
    delta: float,
    reps: int,
    seed: int,
) -> dict[str, float]:
    """Rejection rate of each method at level delta under a true alternative.

    Every method sees the same sampled losses (a paired comparison), and
    requires ``dist.mean < spec.alpha``.
    """
    reps = _validate_reps(reps)
    if not dist.mean < spec.alpha:
        raise ValueError(
            f"alternative must hold: dist mean {dist.mean} must be below alpha {spec.alpha}"
        )
    delta = float(delta)
    if math.isnan(delta) or not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    if not methods:
        raise ValueError("methods must be non-empty")
    pvals = _sample_pvalues(dist, spec, methods, reps, seed)
    return {name: float(np.mean(vals <= delta)) for name, vals in pvals.items()}
