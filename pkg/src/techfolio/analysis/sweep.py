"""Parameter sweeps of the optimal share and location of optimum switches."""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..curves import MarketSpec, TechnologyParams
from ..errors import DomainError, TechfolioError
from ..optimizer import (
    DEFAULT_SETTINGS,
    LocalOptimum,
    OptimizationResult,
    OptimizerSettings,
    optimize,
)

PARAMETERS = ("alphaB", "sigmaB", "c0B", "z0B", "lambda", "K", "rho", "r")

JUMP_THRESHOLD = 0.1
SWITCH_REL_WIDTH = 1e-6


@dataclass(frozen=True)
class Problem:
    techA: TechnologyParams
    techB: TechnologyParams
    market: MarketSpec


def apply_parameter(problem: Problem, name: str, value: float) -> Problem:
    """Return ``problem`` with one named parameter replaced."""
    value = float(value)
    techB_fields = {"alphaB": "alpha", "sigmaB": "sigma", "c0B": "c0", "z0B": "z0"}
    market_fields = {"lambda": "lam", "K": "demand_K", "rho": "rho", "r": "discount_r"}
    if name in techB_fields:
        tech = dataclasses.replace(problem.techB, **{techB_fields[name]: value})
        return dataclasses.replace(problem, techB=tech)
    if name in market_fields:
        market = dataclasses.replace(problem.market, **{market_fields[name]: value})
        return dataclasses.replace(problem, market=market)
    raise DomainError(f"unknown sweep parameter {name!r}; expected one of {PARAMETERS}")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if self.name not in PARAMETERS:
            raise DomainError(
                f"unknown sweep parameter {self.name!r}; expected one of {PARAMETERS}"
            )
        if self.steps < 1:
            raise DomainError(f"axis {self.name}: steps must be >= 1")
        if self.steps == 1 and self.start != self.stop:
            raise DomainError(f"axis {self.name}: one step needs start == stop")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    base: Problem
    axis2: Optional[Axis] = None

    def __post_init__(self) -> None:
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise DomainError("sweep axes must refer to distinct parameters")
        # constructing the corner problems validates every endpoint's domain
        for v1 in (self.axis1.start, self.axis1.stop):
            p = apply_parameter(self.base, self.axis1.name, v1)
            if self.axis2 is not None:
                for v2 in (self.axis2.start, self.axis2.stop):
                    apply_parameter(p, self.axis2.name, v2)

    def problem_at(self, v1: float, v2: Optional[float] = None) -> Problem:
        p = apply_parameter(self.base, self.axis1.name, v1)
        if self.axis2 is not None:
            p = apply_parameter(p, self.axis2.name, v2)
        return p


@dataclass
class SweepNode:
    axis1: float
    axis2: Optional[float]
    result: Optional[OptimizationResult]
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.result is None


@dataclass
class SweepResult:
    spec: SweepSpec
    axis1_values: np.ndarray
    axis2_values: Optional[np.ndarray]
    nodes: List[List[SweepNode]]
    global_share: np.ndarray
    n_local: np.ndarray
    tie: np.ndarray
    discontinuity: np.ndarray
    failed: np.ndarray = field(repr=False)

    def rows(self):
        """Long-format rows in axis1-major order."""
        for i, row in enumerate(self.nodes):
            for j, node in enumerate(row):
                yield (
                    node.axis1,
                    node.axis2,
                    float(self.global_share[i, j]),
                    int(self.n_local[i, j]),
                    bool(self.tie[i, j]),
                    bool(self.discontinuity[i, j]),
                )


def _solve(problem: Problem, settings: OptimizerSettings) -> OptimizationResult:
    return optimize(problem.techA, problem.techB, problem.market, settings)


def _run_node(spec: SweepSpec, v1: float, v2, settings) -> SweepNode:
    try:
        result = _solve(spec.problem_at(v1, v2), settings)
    except (TechfolioError, ArithmeticError, ValueError) as exc:
        return SweepNode(v1, v2, None, f"{type(exc).__name__}: {exc}")
    return SweepNode(v1, v2, result)


def _share_vector(result: OptimizationResult, opt: Optional[LocalOptimum] = None):
    opt = opt or result.global_optimum
    if result.K == 0:
        return np.full(len(opt.location), np.nan)
    return np.asarray(opt.location) / result.K


def _share_distance(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def resolve_threads(threads: int) -> int:
    if threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise DomainError("threads must be >= 0")
    return threads


def sweep_optimal_share(
    spec: SweepSpec,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
    threads: int = 1,
    jump_threshold: float = JUMP_THRESHOLD,
) -> SweepResult:
    """Optimise at every grid node and mark jumps of the global location.

    A node is ``discontinuity``-adjacent when the global location (as a share
    of K) differs by more than ``jump_threshold`` from an axis neighbour.
    Failing nodes are recorded, not raised.
    """
    v1s = spec.axis1.values
    v2s = spec.axis2.values if spec.axis2 is not None else None
    pairs = [(a, b) for a in v1s for b in (v2s if v2s is not None else [None])]
    n1, n2 = len(v1s), (len(v2s) if v2s is not None else 1)

    def work(pair):
        a, b = pair
        return _run_node(spec, float(a), None if b is None else float(b), settings)

    workers = resolve_threads(threads)
    if workers == 1:
        flat = [work(p) for p in pairs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(work, pairs))
    nodes = [flat[i * n2 : (i + 1) * n2] for i in range(n1)]

    share = np.full((n1, n2), np.nan)
    n_local = np.zeros((n1, n2), dtype=int)
    tie = np.zeros((n1, n2), dtype=bool)
    failed = np.zeros((n1, n2), dtype=bool)
    locs = [[None] * n2 for _ in range(n1)]
    for i in range(n1):
        for j in range(n2):
            node = nodes[i][j]
            if node.failed:
                failed[i, j] = True
                continue
            share[i, j] = node.result.global_share
            n_local[i, j] = len(node.result.optima)
            tie[i, j] = node.result.tie
            locs[i][j] = _share_vector(node.result)

    disc = np.zeros((n1, n2), dtype=bool)
    for i in range(n1):
        for j in range(n2):
            for di, dj in ((1, 0), (0, 1)):
                k, m = i + di, j + dj
                if k >= n1 or m >= n2:
                    continue
                if locs[i][j] is None or locs[k][m] is None:
                    continue
                if _share_distance(locs[i][j], locs[k][m]) > jump_threshold:
                    disc[i, j] = disc[k, m] = True
    return SweepResult(spec, v1s, v2s, nodes, share, n_local, tie, disc, failed)


@dataclass(frozen=True)
class Switch:
    """A parameter value where the global optimum jumps between two minima."""

    parameter: str
    value: float
    lower_location: Tuple[float, ...]
    upper_location: Tuple[float, ...]
    # |f(lower branch) - f(upper branch)| / f_scale at ``value``
    value_gap: float
    verified: bool


def _nearest(result: OptimizationResult, share) -> LocalOptimum:
    return min(
        result.optima, key=lambda o: _share_distance(_share_vector(result, o), share)
    )


def _locate_switch(
    spec: SweepSpec,
    p_lo: float,
    p_hi: float,
    s_lo,
    s_hi,
    settings: OptimizerSettings,
    jump_threshold: float,
    rel_width: float,
) -> Optional[Switch]:
    name = spec.axis1.name
    scale = max(abs(p_lo), abs(p_hi)) or abs(p_hi - p_lo)

    def solve(p):
        return _solve(spec.problem_at(p), settings)

    # stage 1: bisect on which basin the global optimum falls into
    while p_hi - p_lo > rel_width * scale:
        mid = 0.5 * (p_lo + p_hi)
        if mid in (p_lo, p_hi):
            break
        s_mid = _share_vector(solve(mid))
        if _share_distance(s_mid, s_lo) <= _share_distance(s_mid, s_hi):
            p_lo, s_lo = mid, s_mid
        else:
            p_hi, s_hi = mid, s_mid
    if _share_distance(s_lo, s_hi) <= jump_threshold:
        # steep but continuous motion of the optimum
        return None

    # stage 2: bisect the value gap between the two tracked branches
    def branch_gap(p):
        res = solve(p)
        lower = _nearest(res, s_lo)
        upper = _nearest(res, s_hi)
        if lower is upper:
            return None, res
        return (lower.value - upper.value, res)

    best_p = 0.5 * (p_lo + p_hi)
    gap, res = branch_gap(best_p)
    lo, hi = p_lo, p_hi
    tol = settings.value_tolerance * abs(res.f_scale)
    for _ in range(80):
        if gap is None or abs(gap) <= tol:
            break
        if gap < 0:
            lo = best_p
        else:
            hi = best_p
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        new_gap, new_res = branch_gap(mid)
        if new_gap is None:
            break
        best_p, gap, res = mid, new_gap, new_res
        tol = settings.value_tolerance * abs(res.f_scale)

    lower = _nearest(res, s_lo)
    upper = _nearest(res, s_hi)
    rel_gap = math.inf if gap is None else abs(gap) / abs(res.f_scale)
    return Switch(
        parameter=name,
        value=float(best_p),
        lower_location=lower.location,
        upper_location=upper.location,
        value_gap=rel_gap,
        verified=gap is not None and abs(gap) <= tol,
    )


def find_switch_along_sweep(
    spec: SweepSpec,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
    threads: int = 1,
    jump_threshold: float = JUMP_THRESHOLD,
    rel_width: float = SWITCH_REL_WIDTH,
) -> List[Switch]:
    """Locate every parameter value where the global optimum jumps.

    Adjacent sweep nodes whose global locations differ by more than
    ``jump_threshold`` (share units) are bisected down to ``rel_width``
    relative width; the two competing branches are then tracked until their
    values agree within the optimizer's value tolerance.
    """
    if spec.axis2 is not None:
        raise DomainError("find_switch_along_sweep needs a single-axis sweep")
    sweep = sweep_optimal_share(spec, settings, threads, jump_threshold)
    row = [n[0] for n in sweep.nodes]
    switches = []
    for a, b in zip(row[:-1], row[1:]):
        if a.failed or b.failed or a.result.K == 0 or b.result.K == 0:
            continue
        s_a = _share_vector(a.result)
        s_b = _share_vector(b.result)
        if _share_distance(s_a, s_b) <= jump_threshold:
            continue
        sw = _locate_switch(
            spec, a.axis1, b.axis1, s_a, s_b, settings, jump_threshold, rel_width
        )
        if sw is not None:
            switches.append(sw)
    return switches
