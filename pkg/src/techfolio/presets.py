"""Parameter sets for the two reference technology pairs.

``similar_pair`` is the almost-identical pair (B slightly noisier, alpha of B
free); ``incumbent_challenger`` is a cheap mature incumbent against a young
costly fast learner.
"""

from __future__ import annotations

from .curves import MarketSpec, TechnologyParams

SIMILAR_A = TechnologyParams("A", c0=2.0, z0=1.0, alpha=0.5, sigma=1.0)
SIMILAR_K = 2.0

INCUMBENT_A = TechnologyParams("A", c0=1.0, z0=100.0, alpha=0.15, sigma=0.1)
CHALLENGER_B = TechnologyParams("B", c0=2.0, z0=1.0, alpha=0.2, sigma=0.1)
TWO_PERIOD_K = 30.0


def similar_B(alpha: float = 0.65) -> TechnologyParams:
    return TechnologyParams("B", c0=2.0, z0=1.0, alpha=alpha, sigma=1.1)


def similar_pair(alphaB: float = 0.65, lam: float = 0.25, K: float = SIMILAR_K, rho: float = 0.0):
    return SIMILAR_A, similar_B(alphaB), MarketSpec(demand_K=K, lam=lam, rho=rho)


def incumbent_challenger(lam: float, K: float = TWO_PERIOD_K, r: float = 0.0, periods: int = 1):
    market = MarketSpec(demand_K=K, lam=lam, discount_r=r, periods=periods)
    return INCUMBENT_A, CHALLENGER_B, market
