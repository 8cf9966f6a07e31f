"""Mean-variance objective ``f = E[V] + lambda * Var(V)`` for two technologies.

``V`` is the total (discounted) production cost. All evaluators accept numpy
arrays of shares and broadcast, which is what the grid optimizer uses; the
scalar wrappers return :class:`ObjectiveValue`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .curves import (
    MarketSpec,
    TechnologyParams,
    learning_factor,
    noise_mean,
    noise_variance,
)
from .errors import DegenerateError, DomainError, UnsupportedFeatureError


@dataclass(frozen=True)
class PortfolioShare:
    """Technology-A production per period; B makes up the rest of K."""

    q_A_per_period: tuple

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "q_A_per_period", tuple(float(q) for q in self.q_A_per_period)
        )
        if not self.q_A_per_period:
            raise DomainError("a portfolio needs at least one period")

    @property
    def periods(self) -> int:
        return len(self.q_A_per_period)

    def q_B_per_period(self, K: float) -> tuple:
        return tuple(K - q for q in self.q_A_per_period)

    def validate(self, market: MarketSpec) -> None:
        if self.periods != market.periods:
            raise DomainError(
                f"portfolio has {self.periods} periods, market has {market.periods}"
            )
        for q in self.q_A_per_period:
            _check_share(q, market.demand_K)


@dataclass(frozen=True)
class ObjectiveValue:
    total: float
    expectation_component: float
    variance_component: float
    # False when a series approximation is evaluated outside q < z0.
    within_validity: bool = True


def compensated_sum(terms: Iterable):
    """Neumaier summation, elementwise over broadcast arrays."""
    terms = list(terms)
    if all(np.ndim(t) == 0 for t in terms):
        return math.fsum(float(t) for t in terms)
    s = None
    c = None
    for t in terms:
        t = np.asarray(t, dtype=float)
        if s is None:
            s = t
            c = np.zeros_like(t)
            continue
        u = s + t
        c = c + np.where(np.abs(s) >= np.abs(t), (s - u) + t, (t - u) + s)
        s = u
    if s is None:
        return 0.0
    return s + c


def _as_q(q):
    return float(q) if np.ndim(q) == 0 else np.asarray(q, dtype=float)


def _check_share(q, K: float, name: str = "qA") -> None:
    if np.ndim(q) == 0:
        if math.isfinite(q) and 0 <= q <= K:
            return
        raise DomainError(f"{name} must lie in [0, K={K}], got {q!r}")
    arr = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > K):
        raise DomainError(f"{name} must lie in [0, K={K}], got {q!r}")


def _scalarize(E, Var, lam: float, valid: bool = True) -> ObjectiveValue:
    E = float(E)
    Var = float(Var)
    return ObjectiveValue(E + lam * Var, E, Var, valid)


# --- one period -------------------------------------------------------------


def _series_factor(tech: TechnologyParams, q, power: int, order: Optional[int]):
    """Multiplier replacing ``learning_factor(tech, q) ** power``.

    ``order=None`` is exact; 0 drops learning; 1 keeps the linear term of the
    binomial expansion in ``q / z0``.
    """
    if order is None:
        return learning_factor(tech, q) ** power
    if order == 0:
        return 1.0 if np.ndim(q) == 0 else np.ones_like(q)
    if order == 1:
        return 1.0 - power * tech.alpha * q / tech.z0
    raise ValueError(f"unsupported expansion order {order}")


def one_period_components(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    qA,
    order: Optional[int] = None,
):
    """Return ``(E[V], Var(V))`` arrays for A-production ``qA``.

    Includes the contemporaneous-correlation covariance when ``rho != 0``.
    """
    K = market.demand_K
    qA = _as_q(qA)
    qB = K - qA
    exp_terms = []
    var_terms = []
    for tech, q in ((techA, qA), (techB, qB)):
        exp_terms.append(
            tech.c0 * noise_mean(tech.sigma) * _series_factor(tech, q, 1, order) * q
        )
        var_terms.append(
            tech.c0**2
            * noise_variance(tech.sigma)
            * _series_factor(tech, q, 2, order)
            * q
            * q
        )
    if market.rho != 0.0:
        corr = math.expm1(market.rho * techA.sigma * techB.sigma)
        if order is None:
            factor = learning_factor(techA, qA) * learning_factor(techB, qB)
        elif order == 0:
            factor = 1.0
        else:
            factor = 1.0 - techA.alpha * qA / techA.z0 - techB.alpha * qB / techB.z0
        var_terms.append(
            2.0
            * qA
            * qB
            * techA.c0
            * techB.c0
            * noise_mean(techA.sigma)
            * noise_mean(techB.sigma)
            * factor
            * corr
        )
    return compensated_sum(exp_terms), compensated_sum(var_terms)


def one_period_values(techA, techB, market, qA, order=None):
    """Vectorised total ``f`` on an array of shares."""
    E, Var = one_period_components(techA, techB, market, qA, order)
    return E + market.lam * Var


def _require_one_period(market: MarketSpec) -> None:
    if market.periods != 1:
        raise DomainError("one-period objective needs market.periods == 1")


def one_period_objective(
    techA: TechnologyParams, techB: TechnologyParams, market: MarketSpec, qA: float
) -> ObjectiveValue:
    _require_one_period(market)
    _check_share(qA, market.demand_K)
    E, Var = one_period_components(techA, techB, market, qA)
    return _scalarize(E, Var, market.lam)


def _series_valid(techA, techB, K: float, qA: float) -> bool:
    return qA < techA.z0 and (K - qA) < techB.z0


def markowitz_zeroth_order(
    techA: TechnologyParams, techB: TechnologyParams, market: MarketSpec, qA: float
) -> ObjectiveValue:
    """Quadratic no-learning approximation of the one-period objective."""
    _check_share(qA, market.demand_K)
    E, Var = one_period_components(techA, techB, market, qA, order=0)
    return _scalarize(
        E, Var, market.lam, _series_valid(techA, techB, market.demand_K, qA)
    )


def series_first_order(
    techA: TechnologyParams, techB: TechnologyParams, market: MarketSpec, qA: float
) -> ObjectiveValue:
    """Approximation keeping the linear learning corrections.

    The expectation carries ``(1 - alpha q/z0)`` and the variance
    ``(1 - 2 alpha q/z0)``. ``within_validity`` is False when either
    technology's production reaches its ``z0`` (expansion diverges).
    """
    _check_share(qA, market.demand_K)
    E, Var = one_period_components(techA, techB, market, qA, order=1)
    return _scalarize(
        E, Var, market.lam, _series_valid(techA, techB, market.demand_K, qA)
    )


def safe_technology_objective(
    c0_safe: float, techB: TechnologyParams, market: MarketSpec, qB: float
) -> ObjectiveValue:
    """Constant-cost incumbent versus a risky challenger in the low-learning regime."""
    if not c0_safe > 0:
        raise DomainError(f"c0_safe must be > 0, got {c0_safe}")
    K = market.demand_K
    _check_share(qB, K, "qB")
    E = c0_safe * (K - qB) + techB.c0 * noise_mean(techB.sigma) * qB
    Var = techB.c0**2 * noise_variance(techB.sigma) * qB * qB
    return _scalarize(E, Var, market.lam)


def safe_technology_minimum(c0_safe: float, techB: TechnologyParams, lam: float) -> float:
    """Unconstrained minimiser ``q*_B`` of :func:`safe_technology_objective`.

    The portfolio is diversified iff ``0 < q*_B < K``.
    """
    curvature = 2.0 * lam * techB.c0**2 * noise_variance(techB.sigma)
    if curvature <= 0:
        raise DegenerateError("safe-technology objective is linear (lambda or sigma is 0)")
    return (c0_safe - techB.c0 * noise_mean(techB.sigma)) / curvature


# --- two periods ------------------------------------------------------------


def two_period_components(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    q1A,
    q2A,
):
    """Return ``(E[V], Var(V))`` of present discounted cost, broadcasting shares.

    Shocks are independent across technologies and periods; within one
    technology c1 and c2 share the first shock, giving a covariance term.
    """
    if market.rho != 0.0:
        raise UnsupportedFeatureError(
            "correlated shocks are not supported in the two-period model"
        )
    K = market.demand_K
    q1A = _as_q(q1A)
    q2A = _as_q(q2A)
    d = math.exp(-market.discount_r)
    exp_terms = []
    var_terms = []
    for tech, q1, q2 in ((techA, q1A, q2A), (techB, K - q1A, K - q2A)):
        s2 = tech.sigma * tech.sigma
        a1 = tech.c0 * learning_factor(tech, q1) * q1
        a2 = d * tech.c0 * learning_factor(tech, q1 + q2) * q2
        exp_terms.append(a1 * math.exp(0.5 * s2))
        exp_terms.append(a2 * math.exp(s2))
        var_terms.append(a1 * a1 * math.exp(s2) * math.expm1(s2))
        var_terms.append(a2 * a2 * math.exp(2 * s2) * math.expm1(2 * s2))
        var_terms.append(2.0 * a1 * a2 * math.exp(1.5 * s2) * math.expm1(s2))
    return compensated_sum(exp_terms), compensated_sum(var_terms)


def two_period_values(techA, techB, market, q1A, q2A):
    E, Var = two_period_components(techA, techB, market, q1A, q2A)
    return E + market.lam * Var


def two_period_objective(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    q1A: float,
    q2A: float,
) -> ObjectiveValue:
    if market.periods != 2:
        raise DomainError("two-period objective needs market.periods == 2")
    _check_share(q1A, market.demand_K, "q1A")
    _check_share(q2A, market.demand_K, "q2A")
    E, Var = two_period_components(techA, techB, market, q1A, q2A)
    return _scalarize(E, Var, market.lam)


def portfolio_objective(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    shares: PortfolioShare | Sequence[float],
) -> ObjectiveValue:
    """Dispatch on the number of periods."""
    if not isinstance(shares, PortfolioShare):
        shares = PortfolioShare(tuple(shares))
    shares.validate(market)
    if market.periods == 1:
        return one_period_objective(techA, techB, market, shares.q_A_per_period[0])
    return two_period_objective(techA, techB, market, *shares.q_A_per_period)
