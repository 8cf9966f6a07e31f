"""Two-asset, no-short-selling Markowitz model used as a no-learning reference.

Maximises ``f(w) = muA w + muB (1 - w) - lam (sA^2 w^2 + sB^2 (1 - w)^2)``
over ``w in [0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import DomainError
from .frontier import FrontierPoint, components_of, lambda_scan, scan_efficient, supporting_intervals


@dataclass(frozen=True)
class MarkowitzAsset:
    mu: float
    s: float

    def __post_init__(self) -> None:
        if self.s < 0:
            raise DomainError(f"return standard deviation must be >= 0, got {self.s}")


@dataclass(frozen=True)
class MarkowitzResult:
    weight: float
    # True on the knife edge where every weight is optimal
    tie: bool
    feasible: Tuple[FrontierPoint, ...]
    components: Tuple[Tuple[int, int], ...]


def markowitz_objective(assetA: MarkowitzAsset, assetB: MarkowitzAsset, lam: float, w):
    w = np.asarray(w, dtype=float)
    return (
        assetA.mu * w
        + assetB.mu * (1 - w)
        - lam * ((assetA.s * w) ** 2 + (assetB.s * (1 - w)) ** 2)
    )


def markowitz_weight(assetA: MarkowitzAsset, assetB: MarkowitzAsset, lam: float):
    """Optimal weight in A and the tie flag."""
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    curvature = 2.0 * lam * (assetA.s**2 + assetB.s**2)
    if curvature == 0:
        if assetA.mu == assetB.mu:
            return 0.5, True
        return (1.0 if assetA.mu > assetB.mu else 0.0), False
    w = (assetA.mu - assetB.mu + 2.0 * lam * assetB.s**2) / curvature
    return float(min(max(w, 0.0), 1.0)), False


def markowitz_reference(
    assetA: MarkowitzAsset, assetB: MarkowitzAsset, lam: float, n_points: int = 1001
) -> MarkowitzResult:
    """Closed-form optimum plus the feasible set (the "bullet").

    Efficiency here means maximal ``E - lam Var`` for some ``lam >= 0``,
    i.e. the upper-left part of the set.
    """
    weight, tie = markowitz_weight(assetA, assetB, lam)
    w = np.linspace(0.0, 1.0, n_points)
    E = assetA.mu * w + assetB.mu * (1 - w)
    V = (assetA.s * w) ** 2 + (assetB.s * (1 - w)) ** 2
    flags = scan_efficient(-E, V, lambda_scan())
    lo, _ = supporting_intervals(-E, V)
    points = tuple(
        FrontierPoint(float(a), float(v), float(e), bool(f))
        for a, v, e, f in zip(w, V, E, flags)
    )
    return MarkowitzResult(weight, tie, points, components_of(~np.isnan(lo) | flags))
