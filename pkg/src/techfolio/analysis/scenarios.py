"""Compare fixed two-period portfolios across a range of discount rates."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..curves import MarketSpec, TechnologyParams
from ..errors import DomainError
from ..objective import PortfolioShare, two_period_objective
from .thresholds import bisect


@dataclass(frozen=True)
class Crossing:
    """Discount rate at which scenarios ``first`` and ``second`` swap order."""

    r: float
    first: int
    second: int


@dataclass(frozen=True)
class ScenarioComparison:
    r_values: np.ndarray
    # shape (n_scenarios, n_r)
    values: np.ndarray
    preferred: np.ndarray
    crossings: Tuple[Crossing, ...]


def _evaluate(techA, techB, market, share: PortfolioShare, r: float) -> float:
    m = dataclasses.replace(market, discount_r=float(r))
    return two_period_objective(techA, techB, m, *share.q_A_per_period).total


def scenario_compare(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    scenarios: Sequence[PortfolioShare],
    r_values: Sequence[float],
) -> ScenarioComparison:
    """Tabulate ``f(scenario, r)`` and locate every pairwise crossing in ``r``."""
    if market.periods != 2:
        raise DomainError("scenario comparison uses the two-period model")
    scenarios = [
        s if isinstance(s, PortfolioShare) else PortfolioShare(tuple(s)) for s in scenarios
    ]
    for s in scenarios:
        s.validate(market)
    rs = np.asarray(r_values, dtype=float)
    if rs.ndim != 1 or rs.size == 0 or np.any(rs < 0) or np.any(np.diff(rs) <= 0):
        raise DomainError("r_values must be a non-empty increasing sequence of r >= 0")
    values = np.array(
        [[_evaluate(techA, techB, market, s, r) for r in rs] for s in scenarios]
    )
    preferred = np.argmin(values, axis=0)

    crossings: List[Crossing] = []
    for i in range(len(scenarios)):
        for j in range(i + 1, len(scenarios)):
            diff = values[i] - values[j]
            for k in range(len(rs) - 1):
                if diff[k] == 0:
                    if 0 < k < len(rs) - 1 and diff[k - 1] * diff[k + 1] < 0:
                        crossings.append(Crossing(float(rs[k]), i, j))
                    continue
                if diff[k] * diff[k + 1] >= 0:
                    continue

                def gap(r, i=i, j=j):
                    return _evaluate(techA, techB, market, scenarios[i], r) - _evaluate(
                        techA, techB, market, scenarios[j], r
                    )

                crossings.append(Crossing(bisect(gap, rs[k], rs[k + 1]), i, j))
    crossings.sort(key=lambda c: (c.r, c.first, c.second))
    return ScenarioComparison(rs, values, preferred, tuple(crossings))
