"""Feasible set in (variance, expectation) space and its efficient subset."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..curves import MarketSpec, TechnologyParams
from ..errors import DomainError
from ..objective import one_period_components


@dataclass(frozen=True)
class FrontierPoint:
    qA: float
    variance: float
    expectation: float
    efficient: bool


@dataclass(frozen=True)
class FeasibleSet:
    points: Tuple[FrontierPoint, ...]
    # inclusive index ranges of the efficient set, in share order
    components: Tuple[Tuple[int, int], ...]
    # [lo, hi] risk aversions for which each point is optimal (nan if never)
    lambda_lo: np.ndarray
    lambda_hi: np.ndarray

    @property
    def n_components(self) -> int:
        return len(self.components)


def lambda_scan(n: int = 200, lo: float = 1e-4, hi: float = 1e4) -> np.ndarray:
    """``0`` followed by ``n`` log-spaced risk aversions."""
    return np.concatenate([[0.0], np.logspace(np.log10(lo), np.log10(hi), n)])


def scan_efficient(E, V, lambdas, rtol: float = 1e-12) -> np.ndarray:
    """Points that minimise ``E + lam * V`` over the sample for some scanned ``lam``."""
    E = np.asarray(E, dtype=float)
    V = np.asarray(V, dtype=float)
    mask = np.zeros(E.shape, dtype=bool)
    for lam in lambdas:
        vals = E + lam * V
        best = vals.min()
        mask |= vals <= best + rtol * max(abs(best), 1e-300)
    return mask


def supporting_intervals(E, V) -> Tuple[np.ndarray, np.ndarray]:
    """Exact range of ``lam >= 0`` for which each sample point is a minimiser.

    Point k is optimal for ``lam`` iff ``E_k - E_j <= lam (V_j - V_k)`` for
    every j. Points that are never optimal get ``nan`` bounds.
    """
    E = np.asarray(E, dtype=float)
    V = np.asarray(V, dtype=float)
    dE = E[:, None] - E[None, :]
    dV = V[None, :] - V[:, None]
    scale = max(np.max(np.abs(E)), 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = dE / dV
    lower = np.where(dV > 0, ratio, -np.inf).max(axis=1)
    upper = np.where(dV < 0, ratio, np.inf).min(axis=1)
    lower = np.maximum(lower, 0.0)
    same = (dV == 0) & (dE > 1e-12 * scale)
    ok = (lower <= upper) & ~same.any(axis=1)
    lo = np.where(ok, lower, np.nan)
    hi = np.where(ok, upper, np.nan)
    return lo, hi


def components_of(mask: np.ndarray) -> Tuple[Tuple[int, int], ...]:
    """Maximal runs of consecutive True entries as inclusive index ranges."""
    runs: List[Tuple[int, int]] = []
    start = None
    for k, flag in enumerate(mask):
        if flag and start is None:
            start = k
        elif not flag and start is not None:
            runs.append((start, k - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return tuple(runs)


def feasible_set(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    n_points: int = 1001,
    lambdas=None,
) -> FeasibleSet:
    """Sample the one-period feasible set and flag its efficient points.

    ``efficient`` comes from a finite risk-aversion scan. Connected
    components are runs of points that are exactly supported by some
    ``lam >= 0``, since a finite scan leaves gaps along a smooth arc.
    """
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    if market.periods != 1:
        raise DomainError("feasible_set is defined for the one-period model")
    qs = np.linspace(0.0, market.demand_K, n_points)
    E, V = one_period_components(techA, techB, market, qs)
    E = np.broadcast_to(E, qs.shape)
    V = np.broadcast_to(V, qs.shape)
    lambdas = lambda_scan() if lambdas is None else lambdas
    flags = scan_efficient(E, V, lambdas)
    lo, hi = supporting_intervals(E, V)
    supported = ~np.isnan(lo) | flags
    points = tuple(
        FrontierPoint(float(q), float(v), float(e), bool(f))
        for q, v, e, f in zip(qs, V, E, flags)
    )
    return FeasibleSet(points, components_of(supported), lo, hi)
