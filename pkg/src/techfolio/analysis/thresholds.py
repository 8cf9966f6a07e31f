"""Closed-form critical values of risk aversion and experience exponent."""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

from ..curves import MarketSpec, TechnologyParams, unit_cost_expectation, unit_cost_variance
from ..errors import DegenerateError, DomainError, NoRootError
from ..objective import one_period_values

A_CORNER = "A-corner"
B_CORNER = "B-corner"

# Denominators smaller than this (relative to the numerator scale) count as zero.
_DEGENERATE_RTOL = 1e-14


def _ratio(num: float, den: float, scale: float, what: str) -> float:
    if abs(den) <= _DEGENERATE_RTOL * max(abs(scale), abs(num), 1e-300):
        raise DegenerateError(f"{what}: denominator vanishes (num={num!r}, den={den!r})")
    return num / den


def lambda_diversification(
    techA: TechnologyParams, techB: TechnologyParams, K: float, at_corner: str = B_CORNER
) -> float:
    """Risk aversion at which a full-specialisation corner first admits the other technology.

    Obtained from ``f'(corner) = 0``. For the B-corner (``qA = 0``)::

        lam = (E[cA(0)] - E[cB(K)] * m) / (2 K Var(cB(K)) * m),
        m = 1 - alphaB K / (z0B + K)

    and symmetrically for the A-corner. Whether the corner is the global
    optimum below this value has to be checked separately.
    """
    if K <= 0:
        raise DomainError("K must be > 0")
    if at_corner == B_CORNER:
        entering, incumbent = techA, techB
    elif at_corner == A_CORNER:
        entering, incumbent = techB, techA
    else:
        raise DomainError(f"at_corner must be {A_CORNER!r} or {B_CORNER!r}")
    m = 1.0 - incumbent.alpha * K / (incumbent.z0 + K)
    e_enter = unit_cost_expectation(entering, 0.0)
    e_inc = unit_cost_expectation(incumbent, K)
    var_inc = unit_cost_variance(incumbent, K)
    num = e_enter - e_inc * m
    den = 2.0 * K * var_inc * m
    return _ratio(num, den, 2.0 * K * e_inc * e_inc, "lambda_diversification")


def lambda_switch_closed_form(
    techA: TechnologyParams, techB: TechnologyParams, K: float
) -> float:
    """Risk aversion at which the two full-specialisation corners have equal ``f``.

    Solves ``f(0) = f(K)``. It is the location of the global switch only
    where both corners are the competing global minima.
    """
    if K <= 0:
        raise DomainError("K must be > 0")
    num = unit_cost_expectation(techA, K) - unit_cost_expectation(techB, K)
    vb = unit_cost_variance(techB, K)
    va = unit_cost_variance(techA, K)
    den = K * (vb - va)
    return _ratio(num, den, K * max(va, vb), "lambda_switch")


def alpha_switch_closed_form(
    techA: TechnologyParams, techB: TechnologyParams, K: float
) -> float:
    """Experience exponent of B equating the two corners at zero risk aversion."""
    if K <= 0:
        raise DomainError("K must be > 0")
    den = math.log(techB.z0 / (techB.z0 + K))
    num = (
        math.log(techA.c0 / techB.c0)
        + 0.5 * (techA.sigma**2 - techB.sigma**2)
        + techA.alpha * math.log(techA.z0 / (techA.z0 + K))
    )
    return _ratio(num, den, 1.0, "alpha_switch")


def bisect(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-13,
    max_iter: int = 200,
) -> float:
    """Plain bisection; ``fn(lo)`` and ``fn(hi)`` must differ in sign."""
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoRootError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol * max(1.0, abs(mid)) or mid in (lo, hi):
            break
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def alpha_switch(
    techA: TechnologyParams,
    techB: TechnologyParams,
    K: float,
    lam: float,
    alpha_max: float = 3.0,
) -> float:
    """B's experience exponent at which ``f(0) = f(K)`` for risk aversion ``lam``.

    ``techB.alpha`` is ignored. At ``lam = 0`` the closed form is used;
    otherwise the corner difference is bisected over ``[0, alpha_max]``.
    """
    if K <= 0:
        raise DomainError("K must be > 0")
    if not alpha_max > 0:
        raise DomainError(f"alpha_max must be > 0, got {alpha_max}")
    if lam == 0:
        return alpha_switch_closed_form(techA, techB, K)
    market = MarketSpec(demand_K=K, lam=lam)

    def corner_gap(alpha: float) -> float:
        b = dataclasses.replace(techB, alpha=alpha)
        return float(
            one_period_values(techA, b, market, 0.0)
            - one_period_values(techA, b, market, K)
        )

    return bisect(corner_gap, 0.0, alpha_max)
