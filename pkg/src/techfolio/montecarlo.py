"""Simulation oracle for the analytic cost moments and objective values.

Shocks come from ``curves.standard_normal_block``: stream 0 is technology A,
stream 1 is technology B, one row per period. Correlation between
contemporaneous shocks is introduced as ``zB' = rho zA + sqrt(1 - rho^2) zB``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .curves import (
    MarketSpec,
    TechnologyParams,
    _check_production,
    cost_moments,
    costs_from_shocks,
    standard_normal_block,
    two_period_cost_moments,
)
from .errors import DomainError
from .objective import PortfolioShare, portfolio_objective

STREAM_A = 0
STREAM_B = 1


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def z_score(self, target: float) -> float:
        diff = self.mean - target
        if self.std_error == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.std_error

    def agrees(self, target: float, n_se: float = 3.0) -> bool:
        return abs(self.z_score(target)) <= n_se


def _check_n(n_samples, minimum: int = 2) -> int:
    if int(n_samples) != n_samples or n_samples < minimum:
        raise DomainError(f"n_samples must be an integer >= {minimum}, got {n_samples}")
    return int(n_samples)


def _centered(x: np.ndarray):
    # shifting by the first draw keeps a constant sample exact
    shift = x[0]
    d = x - shift
    m = d.mean()
    return shift + m, d - m


def mean_estimate(x: np.ndarray, seed: int) -> McEstimate:
    x = np.asarray(x, dtype=float)
    n = x.size
    mean, dev = _centered(x)
    s2 = float(np.dot(dev, dev)) / (n - 1)
    return McEstimate(float(mean), math.sqrt(s2 / n), n, seed)


def variance_estimate(x: np.ndarray, seed: int) -> McEstimate:
    """Unbiased sample variance with the fourth-moment standard error.

    ``SE = sqrt((m4 - m2^2) / n)`` with central sample moments m2 and m4.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    _, dev = _centered(x)
    sq = dev * dev
    m2 = float(sq.mean())
    m4 = float(np.dot(sq, sq)) / n
    var = m2 * n / (n - 1)
    return McEstimate(var, math.sqrt(max(m4 - m2 * m2, 0.0) / n), n, seed)


def covariance_estimate(x: np.ndarray, y: np.ndarray, seed: int) -> McEstimate:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    _, dx = _centered(x)
    _, dy = _centered(y)
    prod = dx * dy
    mean_prod, dev = _centered(prod)
    se = math.sqrt(float(np.dot(dev, dev)) / (n - 1) / n)
    return McEstimate(float(mean_prod) * n / (n - 1), se, n, seed)


def sample_portfolio_costs(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    shares: PortfolioShare,
    n_samples: int,
    seed: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Unit-cost paths of both technologies, each of shape (n, T)."""
    n = _check_n(n_samples, 1)
    shares = shares if isinstance(shares, PortfolioShare) else PortfolioShare(tuple(shares))
    shares.validate(market)
    T = shares.periods
    qA = shares.q_A_per_period
    qB = shares.q_B_per_period(market.demand_K)
    zA = standard_normal_block(seed, STREAM_A, T, n)
    zB = standard_normal_block(seed, STREAM_B, T, n)
    if market.rho != 0:
        zB = market.rho * zA + math.sqrt(1.0 - market.rho**2) * zB
    return costs_from_shocks(techA, qA, zA), costs_from_shocks(techB, qB, zB)


def sample_total_cost(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    shares: PortfolioShare,
    n_samples: int,
    seed: int,
) -> np.ndarray:
    """Realisations of the present discounted total cost V."""
    shares = shares if isinstance(shares, PortfolioShare) else PortfolioShare(tuple(shares))
    cA, cB = sample_portfolio_costs(techA, techB, market, shares, n_samples, seed)
    qA = np.asarray(shares.q_A_per_period, dtype=float)
    qB = np.asarray(shares.q_B_per_period(market.demand_K), dtype=float)
    discount = np.exp(-market.discount_r * np.arange(shares.periods))
    return cA @ (discount * qA) + cB @ (discount * qB)


def estimate_objective(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    shares: PortfolioShare,
    n_samples: int,
    seed: int,
) -> Tuple[McEstimate, McEstimate]:
    """Estimates of E[V] and Var(V) from simulated total costs."""
    n = _check_n(n_samples)
    V = sample_total_cost(techA, techB, market, shares, n, seed)
    return mean_estimate(V, seed), variance_estimate(V, seed)


def estimate_total(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    shares: PortfolioShare,
    n_samples: int,
    seed: int,
) -> McEstimate:
    """Estimate of ``f = E[V] + lam Var(V)``.

    The standard error linearises the estimator as the mean of
    ``V + lam (V - mean)^2``.
    """
    n = _check_n(n_samples)
    V = sample_total_cost(techA, techB, market, shares, n, seed)
    mean, dev = _centered(V)
    var = float(np.dot(dev, dev)) / (n - 1)
    g = dev + market.lam * dev * dev
    _, gdev = _centered(g)
    se = math.sqrt(float(np.dot(gdev, gdev)) / (n - 1) / n)
    return McEstimate(float(mean) + market.lam * var, se, n, seed)


@dataclass(frozen=True)
class MomentEstimates:
    """Per-period mean and variance estimates plus the cross-period covariance."""

    expectation: Tuple[McEstimate, ...]
    variance: Tuple[McEstimate, ...]
    cov12: Optional[McEstimate] = None


def estimate_moments(
    tech: TechnologyParams,
    q_schedule: Sequence[float],
    n_samples: int,
    seed: int,
    stream: int = 0,
) -> MomentEstimates:
    n = _check_n(n_samples)
    q_schedule = list(q_schedule)
    if len(q_schedule) not in (1, 2):
        raise DomainError("q_schedule must cover one or two periods")
    _check_production(q_schedule, "q_schedule")
    z = standard_normal_block(seed, stream, len(q_schedule), n)
    c = costs_from_shocks(tech, q_schedule, z)
    E = tuple(mean_estimate(c[:, t], seed) for t in range(c.shape[1]))
    V = tuple(variance_estimate(c[:, t], seed) for t in range(c.shape[1]))
    cov = covariance_estimate(c[:, 0], c[:, 1], seed) if c.shape[1] == 2 else None
    return MomentEstimates(E, V, cov)


@dataclass(frozen=True)
class OracleCheck:
    quantity: str
    estimate: McEstimate
    analytic: float


def oracle_checks(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    shares: PortfolioShare,
    n_samples: int,
    seed: int,
) -> Tuple[OracleCheck, ...]:
    """Every analytic quantity of a portfolio against one shared simulation.

    Covers E[V], Var(V) and f, plus each technology's per-period cost
    moments (and Cov12 in the two-period case). The per-technology draws
    are the portfolio's own, so they equal ``estimate_moments`` on the
    matching stream when ``rho = 0``.
    """
    n = _check_n(n_samples)
    shares = shares if isinstance(shares, PortfolioShare) else PortfolioShare(tuple(shares))
    exact = portfolio_objective(techA, techB, market, shares)
    cA, cB = sample_portfolio_costs(techA, techB, market, shares, n, seed)
    qA = np.asarray(shares.q_A_per_period, dtype=float)
    qB = np.asarray(shares.q_B_per_period(market.demand_K), dtype=float)
    discount = np.exp(-market.discount_r * np.arange(shares.periods))
    V = cA @ (discount * qA) + cB @ (discount * qB)

    mean, dev = _centered(V)
    var = float(np.dot(dev, dev)) / (n - 1)
    _, gdev = _centered(dev + market.lam * dev * dev)
    f_se = math.sqrt(float(np.dot(gdev, gdev)) / (n - 1) / n)
    out = [
        OracleCheck("E[V]", mean_estimate(V, seed), exact.expectation_component),
        OracleCheck("Var[V]", variance_estimate(V, seed), exact.variance_component),
        OracleCheck("f", McEstimate(float(mean) + market.lam * var, f_se, n, seed), exact.total),
    ]
    for tech, c, q in ((techA, cA, qA), (techB, cB, qB)):
        p = tech.name
        if shares.periods == 1:
            cm = cost_moments(tech, float(q[0]))
            out.append(OracleCheck(f"{p}.E1", mean_estimate(c[:, 0], seed), cm.expectation))
            out.append(OracleCheck(f"{p}.Var1", variance_estimate(c[:, 0], seed), cm.variance))
        else:
            tm = two_period_cost_moments(tech, float(q[0]), float(q[1]))
            out.append(OracleCheck(f"{p}.E1", mean_estimate(c[:, 0], seed), tm.e1))
            out.append(OracleCheck(f"{p}.E2", mean_estimate(c[:, 1], seed), tm.e2))
            out.append(OracleCheck(f"{p}.Var1", variance_estimate(c[:, 0], seed), tm.var1))
            out.append(OracleCheck(f"{p}.Var2", variance_estimate(c[:, 1], seed), tm.var2))
            out.append(
                OracleCheck(f"{p}.Cov12", covariance_estimate(c[:, 0], c[:, 1], seed), tm.cov12)
            )
    return tuple(out)
