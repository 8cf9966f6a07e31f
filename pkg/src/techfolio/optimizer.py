"""Enumerate local minima of the objective over the share domain.

The objective is non-convex, so both optimizers evaluate it on a uniform
grid first, bracket every discrete local minimum, and polish each bracket by
golden-section search. Corners are kept as candidates and compared against
the refined interior points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .curves import MarketSpec, TechnologyParams
from .errors import ConfigError, DomainError
from .objective import one_period_values, two_period_values

CORNER = "corner"
INTERIOR = "interior"

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerSettings:
    """Grid sizes and dimensionless tolerances.

    ``location_tolerance`` and ``boundary_tolerance`` scale with K,
    ``value_tolerance`` with ``f_scale`` (f at the midpoint share) and
    ``gradient_tolerance`` with ``f_scale / K``.
    """

    grid_resolution: int = 2001
    grid_resolution_2d: int = 301
    location_tolerance: float = 1e-10
    value_tolerance: float = 1e-12
    gradient_tolerance: float = 1e-6
    boundary_tolerance: float = 1e-9
    max_coordinate_sweeps: int = 400
    refine: bool = True

    def __post_init__(self) -> None:
        if self.grid_resolution < 3:
            raise ConfigError(
                f"grid_resolution must be >= 3, got {self.grid_resolution}"
            )
        if self.grid_resolution_2d < 3:
            raise ConfigError(
                f"grid_resolution_2d must be >= 3, got {self.grid_resolution_2d}"
            )


DEFAULT_SETTINGS = OptimizerSettings()


@dataclass(frozen=True)
class LocalOptimum:
    location: Tuple[float, ...]
    value: float
    kind: str
    is_global: bool


@dataclass(frozen=True)
class OptimizationResult:
    optima: Tuple[LocalOptimum, ...]
    grid_resolution: int
    refined: bool
    K: float
    f_scale: float

    @property
    def global_optima(self) -> List[LocalOptimum]:
        return [o for o in self.optima if o.is_global]

    @property
    def global_optimum(self) -> LocalOptimum:
        """The global optimum; on a tie, the one with the smallest location."""
        return self.global_optima[0]

    @property
    def tie(self) -> bool:
        return len(self.global_optima) > 1

    @property
    def global_share(self) -> float:
        if self.K == 0:
            return math.nan
        return self.global_optimum.location[0] / self.K


def golden_section(
    fn: Callable[[float], float], a: float, b: float, tol: float
) -> Tuple[float, float]:
    """Minimise a unimodal ``fn`` on ``[a, b]`` to bracket width ``tol``.

    Endpoints are never evaluated; returns ``(x, fn(x))`` for the best
    interior probe.
    """
    if b < a:
        a, b = b, a
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = fn(c)
    fd = fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
        if c >= d:
            # bracket has collapsed to floating-point resolution
            break
    return (c, fc) if fc <= fd else (d, fd)


def _minimize_interval(fn, lo, hi, tol, domain_lo, domain_hi, boundary_tol):
    """Golden section on ``[lo, hi]`` that also tries domain endpoints it touches."""
    if hi - lo <= tol:
        x = 0.5 * (lo + hi)
        best = (x, fn(x))
    else:
        best = golden_section(fn, lo, hi, tol)
    for end, touched in ((domain_lo, lo <= domain_lo), (domain_hi, hi >= domain_hi)):
        if touched or abs(best[0] - end) <= boundary_tol:
            fe = fn(end)
            if fe <= best[1]:
                best = (end, fe)
    return best


def _on_boundary(x: float, K: float, boundary_tol: float) -> bool:
    return x <= boundary_tol or x >= K - boundary_tol


def classify_solution(
    opt: LocalOptimum | Sequence[float],
    market: MarketSpec,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
) -> str:
    """``corner`` if any coordinate is within boundary tolerance of 0 or K."""
    location = opt.location if isinstance(opt, LocalOptimum) else tuple(opt)
    K = market.demand_K
    tol = settings.boundary_tolerance * K
    if any(_on_boundary(x, K, tol) for x in location):
        return CORNER
    return INTERIOR


def _dedupe(cands, separation):
    """Merge candidates closer than ``separation`` (max-norm), keeping the lower value."""
    kept: list = []
    for loc, val in sorted(cands, key=lambda c: c[1]):
        if all(max(abs(a - b) for a, b in zip(loc, k[0])) > separation for k in kept):
            kept.append((loc, val))
    return kept


def _assemble(cands, market, settings, f_scale, n, refined) -> OptimizationResult:
    best = min(v for _, v in cands)
    tol = settings.value_tolerance * abs(f_scale)
    optima = []
    for loc, val in sorted(cands, key=lambda c: c[0]):
        optima.append(
            LocalOptimum(
                location=tuple(float(x) for x in loc),
                value=float(val),
                kind=classify_solution(loc, market, settings),
                is_global=bool(val - best <= tol),
            )
        )
    return OptimizationResult(tuple(optima), n, refined, market.demand_K, float(f_scale))


def _empty_result(market: MarketSpec, dims: int, n: int) -> OptimizationResult:
    opt = LocalOptimum((0.0,) * dims, 0.0, CORNER, True)
    return OptimizationResult((opt,), n, False, 0.0, 0.0)


def _check_positive_K(market: MarketSpec) -> None:
    if market.demand_K < 0:
        raise DomainError("demand_K must be >= 0")


def optimize_one_period(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
    order: Optional[int] = None,
) -> OptimizationResult:
    """Grid-and-refine minimisation of the one-period objective.

    ``order`` selects the series approximation (0 or 1) instead of the
    exact objective.
    """
    if market.periods != 1:
        raise DomainError("optimize_one_period needs market.periods == 1")
    _check_positive_K(market)
    n = settings.grid_resolution
    K = market.demand_K
    if K == 0:
        return _empty_result(market, 1, n)

    def fn(q: float) -> float:
        return one_period_values(techA, techB, market, min(max(q, 0.0), K), order)

    qs = np.linspace(0.0, K, n)
    fv = one_period_values(techA, techB, market, qs, order)
    d = np.diff(fv)
    step = K / (n - 1)
    loc_tol = settings.location_tolerance * K
    bnd_tol = settings.boundary_tolerance * K
    probe = 1e-7 * K

    brackets = []
    # corners are probed both on the grid and just inside the boundary
    if d[0] >= 0 or fn(probe) >= fv[0]:
        brackets.append((0, 1))
    for i in np.nonzero((d[:-1] < 0) & (d[1:] >= 0))[0] + 1:
        brackets.append((i - 1, i + 1))
    if d[-1] <= 0 or fn(K - probe) >= fv[-1]:
        brackets.append((n - 2, n - 1))

    cands = []
    for lo, hi in brackets:
        if settings.refine:
            x, fx = _minimize_interval(
                fn, qs[lo], qs[hi], loc_tol, 0.0, K, bnd_tol
            )
        else:
            idx = lo + int(np.argmin(fv[lo : hi + 1]))
            x, fx = qs[idx], fv[idx]
        cands.append(((float(x),), float(fx)))
    cands = _dedupe(cands, 2.0 * step)
    f_scale = float(fn(0.5 * K))
    return _assemble(cands, market, settings, f_scale, n, settings.refine)


def _local_minima_2d(F: np.ndarray) -> np.ndarray:
    """Indices of cells whose value is <= all (up to 8) neighbours."""
    P = np.pad(F, 1, constant_values=np.inf)
    n1, n2 = F.shape
    mask = np.ones(F.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= F <= P[1 + di : 1 + di + n1, 1 + dj : 1 + dj + n2]
    return np.argwhere(mask)


def _coordinate_descent(fn2, x, K, step, settings):
    loc_tol = settings.location_tolerance * K
    bnd_tol = settings.boundary_tolerance * K
    x = list(x)
    fx = fn2(*x)
    width = step
    for _ in range(settings.max_coordinate_sweeps):
        move = 0.0
        for axis in (0, 1):
            lo = max(0.0, x[axis] - width)
            hi = min(K, x[axis] + width)

            def line(t, axis=axis):
                y = list(x)
                y[axis] = t
                return fn2(*y)

            t, ft = _minimize_interval(line, lo, hi, loc_tol, 0.0, K, bnd_tol)
            if ft <= fx:
                move = max(move, abs(t - x[axis]))
                x[axis] = t
                fx = ft
        if move <= loc_tol:
            break
        # keep the search window a few steps wider than the last move
        width = min(step, max(4.0 * move, 10.0 * loc_tol))
    return tuple(x), fx


def optimize_two_period(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
) -> OptimizationResult:
    if market.periods != 2:
        raise DomainError("optimize_two_period needs market.periods == 2")
    _check_positive_K(market)
    n = settings.grid_resolution_2d
    K = market.demand_K
    if K == 0:
        return _empty_result(market, 2, n)

    def fn2(q1: float, q2: float) -> float:
        return two_period_values(
            techA, techB, market, min(max(q1, 0.0), K), min(max(q2, 0.0), K)
        )

    g = np.linspace(0.0, K, n)
    Q1, Q2 = np.meshgrid(g, g, indexing="ij")
    F = two_period_values(techA, techB, market, Q1, Q2)
    step = K / (n - 1)
    cands = []
    for i, j in _local_minima_2d(F):
        start = (float(g[i]), float(g[j]))
        if settings.refine:
            cands.append(_coordinate_descent(fn2, start, K, step, settings))
        else:
            cands.append((start, float(F[i, j])))
    cands = _dedupe(cands, 2.0 * step)
    f_scale = float(fn2(0.5 * K, 0.5 * K))
    return _assemble(cands, market, settings, f_scale, n, settings.refine)


def optimize(
    techA: TechnologyParams,
    techB: TechnologyParams,
    market: MarketSpec,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
) -> OptimizationResult:
    """Dispatch on ``market.periods``."""
    if market.periods == 1:
        return optimize_one_period(techA, techB, market, settings)
    return optimize_two_period(techA, techB, market, settings)


def gradient(fn, location: Sequence[float], K: float, rel_step: float = 1e-6):
    """Central finite-difference gradient, one-sided at the domain edges."""
    h = rel_step * K
    x = list(location)
    out = []
    for axis in range(len(x)):
        lo = max(0.0, x[axis] - h)
        hi = min(K, x[axis] + h)
        a = list(x)
        b = list(x)
        a[axis] = lo
        b[axis] = hi
        out.append((fn(*b) - fn(*a)) / (hi - lo))
    return out
