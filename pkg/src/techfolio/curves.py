"""Stochastic Wright's-law technologies and their cost moments.

A technology's unit cost after producing ``q`` units on top of ``z0`` is

    c1 = c0 * (z0 / (z0 + q)) ** alpha * exp(eta),   eta ~ N(0, sigma**2)

so ``c1`` is lognormal. In the two-period model the shocks accumulate,
``c2 = c0 * (z0 / z2) ** alpha * exp(eta1 + eta2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericRangeError

SIGMA_MAX = 3.0


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class TechnologyParams:
    """One technology: initial cost/cumulative production and learning law."""

    name: str
    c0: float
    z0: float
    alpha: float
    sigma: float

    def __post_init__(self) -> None:
        for key in ("c0", "z0", "alpha", "sigma"):
            _check_finite(key, getattr(self, key))
        if self.c0 <= 0:
            raise DomainError(f"c0 must be > 0, got {self.c0}")
        if self.z0 <= 0:
            raise DomainError(f"z0 must be > 0, got {self.z0}")
        if self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        if self.sigma < 0:
            raise DomainError(f"sigma must be >= 0, got {self.sigma}")
        if self.sigma > SIGMA_MAX:
            raise NumericRangeError(
                f"sigma={self.sigma} exceeds supported maximum {SIGMA_MAX}"
            )

    @property
    def progress_ratio(self) -> float:
        return 2.0 ** (-self.alpha)

    @property
    def learning_rate(self) -> float:
        return -math.expm1(-self.alpha * math.log(2.0))


@dataclass(frozen=True)
class MarketSpec:
    """System-level settings shared by both technologies."""

    demand_K: float
    lam: float
    rho: float = 0.0
    discount_r: float = 0.0
    periods: int = 1

    def __post_init__(self) -> None:
        for key in ("demand_K", "lam", "rho", "discount_r"):
            _check_finite(key, getattr(self, key))
        if self.demand_K < 0:
            raise DomainError(f"demand_K must be >= 0, got {self.demand_K}")
        if self.lam < 0:
            raise DomainError(f"lambda must be >= 0, got {self.lam}")
        if not -1.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [-1, 1], got {self.rho}")
        if self.discount_r < 0:
            raise DomainError(f"discount_r must be >= 0, got {self.discount_r}")
        if self.periods not in (1, 2):
            raise DomainError(f"periods must be 1 or 2, got {self.periods}")


@dataclass(frozen=True)
class CostMoments:
    expectation: float
    variance: float


@dataclass(frozen=True)
class TwoPeriodMoments:
    """Undiscounted moments of (c1, c2) for one technology."""

    e1: float
    e2: float
    var1: float
    var2: float
    cov12: float


def _check_production(q, what: str = "q") -> None:
    if np.ndim(q) == 0:
        if math.isfinite(q) and q >= 0:
            return
        raise DomainError(f"{what} must be finite and >= 0, got {q!r}")
    arr = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"{what} must be finite and >= 0, got {q!r}")


def learning_factor(tech: TechnologyParams, q):
    """Deterministic cost multiplier ``(z0 / (z0 + q)) ** alpha``.

    Evaluated as ``exp(-alpha * log1p(q / z0))`` so that ``q << z0`` keeps
    full relative precision. Accepts scalars or arrays.
    """
    if np.ndim(q) == 0:
        return math.exp(-tech.alpha * math.log1p(float(q) / tech.z0))
    return np.exp(-tech.alpha * np.log1p(np.asarray(q, dtype=float) / tech.z0))


def noise_mean(sigma: float) -> float:
    """E[exp(eta)] for eta ~ N(0, sigma^2)."""
    return math.exp(0.5 * sigma * sigma)


def noise_variance(sigma: float) -> float:
    """Var(exp(eta)) for eta ~ N(0, sigma^2)."""
    s2 = sigma * sigma
    return math.exp(s2) * math.expm1(s2)


def unit_cost_expectation(tech: TechnologyParams, q):
    _check_production(q)
    out = tech.c0 * learning_factor(tech, q) * noise_mean(tech.sigma)
    return float(out) if np.ndim(out) == 0 else out


def unit_cost_variance(tech: TechnologyParams, q):
    _check_production(q)
    g = learning_factor(tech, q)
    out = tech.c0 * tech.c0 * g * g * noise_variance(tech.sigma)
    return float(out) if np.ndim(out) == 0 else out


def cost_moments(tech: TechnologyParams, q: float) -> CostMoments:
    return CostMoments(unit_cost_expectation(tech, q), unit_cost_variance(tech, q))


def two_period_cost_moments(
    tech: TechnologyParams, q1: float, q2: float
) -> TwoPeriodMoments:
    _check_production(q1, "q1")
    _check_production(q2, "q2")
    s2 = tech.sigma * tech.sigma
    cbar1 = tech.c0 * float(learning_factor(tech, q1))
    cbar2 = tech.c0 * float(learning_factor(tech, q1 + q2))
    return TwoPeriodMoments(
        e1=cbar1 * math.exp(0.5 * s2),
        e2=cbar2 * math.exp(s2),
        var1=cbar1 * cbar1 * math.exp(s2) * math.expm1(s2),
        var2=cbar2 * cbar2 * math.exp(2 * s2) * math.expm1(2 * s2),
        cov12=cbar1 * cbar2 * math.exp(1.5 * s2) * math.expm1(s2),
    )


def standard_normal_block(
    seed: int, stream: int, n_periods: int, n_samples: int
) -> np.ndarray:
    """N(0, 1) draws of shape (n_periods, n_samples) for one stream.

    Streams are addressed technology-major, period-minor: row ``t`` of
    stream ``k`` is seeded by ``SeedSequence(seed, spawn_key=(k, t))``,
    i.e. ``SeedSequence(seed).spawn()[k].spawn()[t]``. A stream's draws
    therefore never depend on which other streams are requested.
    """
    out = np.empty((n_periods, n_samples))
    for t in range(n_periods):
        seq = np.random.SeedSequence(seed, spawn_key=(stream, t))
        out[t] = np.random.default_rng(seq).standard_normal(n_samples)
    return out


def costs_from_shocks(
    tech: TechnologyParams, q_schedule: Sequence[float], z: np.ndarray
) -> np.ndarray:
    """Cost paths given standard-normal shocks ``z`` of shape (T, n).

    Returns an array of shape (n, T) of realised unit costs c1..cT.
    """
    q = np.asarray(q_schedule, dtype=float)
    cum = np.cumsum(q)
    prefactor = tech.c0 * learning_factor(tech, cum)
    log_noise = np.cumsum(tech.sigma * z, axis=0)
    return (prefactor[:, None] * np.exp(log_noise)).T


def sample_cost_paths(
    tech: TechnologyParams,
    q_schedule: Sequence[float],
    n_samples: int,
    seed: int,
    stream: int = 0,
) -> np.ndarray:
    """Draw ``n_samples`` realisations of (c1, ..., cT) for one technology.

    ``stream`` selects the technology slot in the seed tree; the portfolio
    sampler uses slot 0 for technology A and slot 1 for B, so a single-
    technology draw reproduces the matching portfolio draw exactly.
    """
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError(f"n_samples must be a positive integer, got {n_samples}")
    q_schedule = list(q_schedule)
    if not q_schedule:
        raise DomainError("q_schedule must contain at least one period")
    _check_production(q_schedule, "q_schedule")
    z = standard_normal_block(seed, stream, len(q_schedule), int(n_samples))
    return costs_from_shocks(tech, q_schedule, z)
