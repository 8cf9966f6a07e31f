import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from techfolio.curves import MarketSpec, TechnologyParams
from techfolio.errors import ConfigError, DomainError
from techfolio.objective import one_period_values, two_period_components
from techfolio.optimizer import (
    CORNER,
    INTERIOR,
    LocalOptimum,
    OptimizerSettings,
    classify_solution,
    golden_section,
    gradient,
    optimize,
    optimize_one_period,
    optimize_two_period,
)
from techfolio.presets import CHALLENGER_B, INCUMBENT_A, SIMILAR_A, similar_B

from conftest import tech


def dense_minimum(A, B, m, factor=10, n=2001):
    qs = np.linspace(0, m.demand_K, factor * (n - 1) + 1)
    return float(np.min(one_period_values(A, B, m, qs)))


def dense_local_minima(A, B, m, n=200001):
    qs = np.linspace(0, m.demand_K, n)
    f = one_period_values(A, B, m, qs)
    d = np.diff(f)
    count = int(d[0] > 0) + int(d[-1] < 0)
    count += int(np.sum((d[:-1] < 0) & (d[1:] > 0)))
    return count


def test_risk_neutral_specialises():
    for aB in np.linspace(0, 1, 11):
        r = optimize_one_period(SIMILAR_A, similar_B(aB), MarketSpec(2.0, 0.0))
        g = r.global_optimum
        assert g.kind == CORNER
        assert g.location[0] in (0.0, 2.0)


def test_two_local_minima_with_B_dominant_global():
    r = optimize_one_period(SIMILAR_A, similar_B(0.72), MarketSpec(2.0, 0.25))
    assert len(r.optima) == 2
    assert all(o.kind == INTERIOR for o in r.optima)
    assert abs(r.global_share - 0.2) < 0.05
    assert r.global_optimum.location[0] < 1.0


def test_identical_technologies_symmetric_and_tied():
    A = tech("A", alpha=0.7, sigma=1.0)
    B = tech("B", alpha=0.7, sigma=1.0)
    for lam in (0.0, 0.05, 0.3, 2.0):
        r = optimize_one_period(A, B, MarketSpec(2.0, lam))
        locs = sorted(o.location[0] for o in r.optima)
        mirrored = sorted(2.0 - x for x in locs)
        assert np.allclose(locs, mirrored, atol=1e-6)
        if len(r.optima) > 1:
            assert r.tie


def test_result_sorted_and_global_flags():
    r = optimize_one_period(SIMILAR_A, similar_B(0.71), MarketSpec(2.0, 0.25))
    locs = [o.location for o in r.optima]
    assert locs == sorted(locs)
    g = [o for o in r.optima if o.is_global]
    assert g
    assert all(g[0].value <= o.value for o in r.optima)
    assert r.grid_resolution == 2001 and r.refined


def test_zero_demand_returns_empty_portfolio():
    r = optimize_one_period(SIMILAR_A, similar_B(0.6), MarketSpec(0.0, 0.25))
    assert r.global_optimum.location == (0.0,)
    assert r.global_optimum.value == 0.0
    r2 = optimize_two_period(INCUMBENT_A, CHALLENGER_B, MarketSpec(0.0, 0.25, periods=2))
    assert r2.global_optimum.location == (0.0, 0.0)


def test_grid_resolution_validated():
    with pytest.raises(ConfigError):
        OptimizerSettings(grid_resolution=2)
    with pytest.raises(ConfigError):
        OptimizerSettings(grid_resolution_2d=2)


def test_period_mismatch():
    with pytest.raises(DomainError):
        optimize_one_period(SIMILAR_A, similar_B(0.6), MarketSpec(2.0, 0.25, periods=2))
    with pytest.raises(DomainError):
        optimize_two_period(SIMILAR_A, similar_B(0.6), MarketSpec(2.0, 0.25))


def test_classify_solution():
    m = MarketSpec(2.0, 0.25)
    s = OptimizerSettings()
    assert classify_solution((0.0,), m) == CORNER
    assert classify_solution((1.0,), m) == INTERIOR
    assert classify_solution((2.0 - 0.5 * s.boundary_tolerance * 2.0,), m) == CORNER
    assert classify_solution((2.0 - 10 * s.boundary_tolerance * 2.0,), m) == INTERIOR
    assert classify_solution(LocalOptimum((1.0, 2.0), 0.0, INTERIOR, True), m) == CORNER
    assert classify_solution((1.0, 1.5), m) == INTERIOR


def test_golden_section_quadratic():
    x, fx = golden_section(lambda x: (x - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert abs(x - 0.3) < 1e-9
    assert fx < 1e-18


@pytest.mark.parametrize("aB", np.round(np.arange(0.0, 1.01, 0.1), 2))
@pytest.mark.parametrize("lam", np.round(np.arange(0.0, 1.01, 0.1), 2))
def test_completeness_similar_grid(aB, lam):
    A, B, m = SIMILAR_A, similar_B(aB), MarketSpec(2.0, lam)
    r = optimize_one_period(A, B, m)
    assert 1 <= len(r.optima) <= 2
    assert len(r.optima) == dense_local_minima(A, B, m)
    # oracle equivalence against a 10x finer grid
    assert r.global_optimum.value <= dense_minimum(A, B, m) + 1e-12 * abs(r.f_scale)


@st.composite
def one_period_problems(draw):
    def t(name):
        return TechnologyParams(
            name,
            c0=draw(st.floats(0.5, 4.0)),
            z0=draw(st.floats(0.2, 5.0)),
            alpha=draw(st.floats(0.0, 1.0)),
            sigma=draw(st.floats(0.0, 1.2)),
        )

    m = MarketSpec(
        demand_K=draw(st.floats(0.05, 10.0)),
        lam=draw(st.floats(0.0, 1.5)),
        rho=draw(st.floats(-0.5, 0.5)),
    )
    return t("A"), t("B"), m


@given(one_period_problems())
def test_oracle_equivalence_random(p):
    A, B, m = p
    r = optimize_one_period(A, B, m)
    assert r.global_optimum.value <= dense_minimum(A, B, m) + 1e-12 * abs(r.f_scale)


@given(one_period_problems())
def test_interior_optima_are_stationary(p):
    A, B, m = p
    s = OptimizerSettings()
    r = optimize_one_period(A, B, m, s)
    fn = lambda q: float(one_period_values(A, B, m, q))
    tol = s.gradient_tolerance * abs(r.f_scale) / m.demand_K
    for o in r.optima:
        if o.kind == INTERIOR:
            (g,) = gradient(fn, o.location, m.demand_K)
            # finite-difference error at the gradient's own step scale
            assert abs(g) < max(tol, 1e-7 * abs(r.f_scale) / m.demand_K)


@given(one_period_problems())
def test_deterministic(p):
    A, B, m = p
    assert optimize_one_period(A, B, m) == optimize_one_period(A, B, m)


def test_global_value_continuous_along_alpha_sweep():
    m = MarketSpec(2.0, 0.25)

    def max_jump(steps):
        vals = [
            optimize_one_period(SIMILAR_A, similar_B(a), m).global_optimum.value
            for a in np.linspace(0.68, 0.74, steps)
        ]
        return np.max(np.abs(np.diff(vals)))

    coarse, fine = max_jump(7), max_jump(61)
    assert fine < 0.2 * coarse


def test_no_refine_uses_grid_points():
    s = OptimizerSettings(grid_resolution=101, refine=False)
    r = optimize_one_period(SIMILAR_A, similar_B(0.72), MarketSpec(2.0, 0.25), s)
    qs = np.linspace(0, 2, 101)
    for o in r.optima:
        assert np.min(np.abs(qs - o.location[0])) == 0.0
    assert not r.refined


TWO_PERIOD_CASES = [
    (0.1, 0.1, (0.0, 0.0)),
    (0.1, 1.0, (30.0, 30.0)),
    (0.5, 1.0, (30.0, 0.0)),
]


@pytest.mark.parametrize("lam,r,expected", TWO_PERIOD_CASES)
def test_two_period_global_corners(lam, r, expected):
    m = MarketSpec(30.0, lam, discount_r=r, periods=2)
    res = optimize_two_period(INCUMBENT_A, CHALLENGER_B, m)
    assert res.global_optimum.location == pytest.approx(expected, abs=1e-6)
    assert res.global_optimum.kind == CORNER


def test_two_period_all_corners_local_minima():
    m = MarketSpec(30.0, 0.1, discount_r=0.1, periods=2)
    res = optimize_two_period(INCUMBENT_A, CHALLENGER_B, m)
    locs = {tuple(round(x, 6) for x in o.location) for o in res.optima}
    assert {(0.0, 0.0), (0.0, 30.0), (30.0, 0.0), (30.0, 30.0)} <= locs


def test_two_period_oracle_equivalence():
    for lam, r in ((0.5, 0.1), (3.0, 0.1), (3.0, 3.0), (0.5, 1.0)):
        m = MarketSpec(30.0, lam, discount_r=r, periods=2)
        res = optimize_two_period(INCUMBENT_A, CHALLENGER_B, m)
        qs = np.linspace(0, 30, 1201)
        Q1, Q2 = np.meshgrid(qs, qs, indexing="ij")
        E, V = two_period_components(INCUMBENT_A, CHALLENGER_B, m, Q1, Q2)
        dense = float(np.min(E + lam * V))
        assert res.global_optimum.value <= dense + 1e-12 * abs(res.f_scale)


def test_two_period_interior_gradient():
    m = MarketSpec(30.0, 3.0, discount_r=0.1, periods=2)
    s = OptimizerSettings()
    res = optimize_two_period(INCUMBENT_A, CHALLENGER_B, m, s)

    def fn(a, b):
        E, V = two_period_components(INCUMBENT_A, CHALLENGER_B, m, a, b)
        return float(E + 3.0 * V)

    tol = s.gradient_tolerance * abs(res.f_scale) / 30.0
    for o in res.optima:
        if o.kind == INTERIOR:
            assert max(abs(g) for g in gradient(fn, o.location, 30.0)) < tol


def test_optimize_dispatch():
    m1 = MarketSpec(2.0, 0.25)
    m2 = MarketSpec(30.0, 0.1, discount_r=1.0, periods=2)
    assert optimize(SIMILAR_A, similar_B(0.7), m1) == optimize_one_period(SIMILAR_A, similar_B(0.7), m1)
    assert optimize(INCUMBENT_A, CHALLENGER_B, m2) == optimize_two_period(INCUMBENT_A, CHALLENGER_B, m2)


def test_approximation_order_optimization():
    # with no learning every order optimises the same quadratic
    A = tech("A", alpha=0.0, sigma=1.0)
    B = tech("B", alpha=0.0, sigma=1.1)
    m = MarketSpec(2.0, 0.25)
    shares = [optimize_one_period(A, B, m, order=o).global_share for o in (None, 0, 1)]
    assert max(shares) - min(shares) < 1e-8
