import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from techfolio.analysis import (
    A_CORNER,
    B_CORNER,
    Axis,
    Problem,
    SweepSpec,
    alpha_switch,
    alpha_switch_closed_form,
    find_switch_along_sweep,
    lambda_diversification,
    lambda_switch_closed_form,
)
from techfolio.analysis.thresholds import bisect
from techfolio.curves import MarketSpec
from techfolio.errors import DegenerateError, DomainError, NoRootError
from techfolio.objective import one_period_objective
from techfolio.optimizer import CORNER, INTERIOR, OptimizerSettings, optimize_one_period
from techfolio.presets import SIMILAR_A, similar_B

from conftest import tech


def test_lambda_diversification_similar():
    lam = lambda_diversification(SIMILAR_A, similar_B(0.8), 2.0, B_CORNER)
    assert lam == pytest.approx(0.255, abs=1e-3)


def test_lambda_diversification_symmetric():
    A = tech("A", alpha=0.6, sigma=0.9)
    B = tech("B", alpha=0.6, sigma=0.9)
    assert lambda_diversification(A, B, 2.0, A_CORNER) == pytest.approx(
        lambda_diversification(A, B, 2.0, B_CORNER), rel=1e-14
    )


def test_lambda_diversification_brackets_corner_to_interior():
    A, B = SIMILAR_A, similar_B(0.8)
    lam = lambda_diversification(A, B, 2.0, B_CORNER)
    below = optimize_one_period(A, B, MarketSpec(2.0, lam - 1e-3)).global_optimum
    above = optimize_one_period(A, B, MarketSpec(2.0, lam + 1e-3)).global_optimum
    assert below.kind == CORNER and below.location == (0.0,)
    assert above.kind == INTERIOR


def test_lambda_diversification_degenerate():
    with pytest.raises(DegenerateError):
        lambda_diversification(SIMILAR_A, tech("B", sigma=0.0), 2.0, B_CORNER)
    with pytest.raises(DomainError):
        lambda_diversification(SIMILAR_A, similar_B(0.8), 2.0, "middle")


def test_lambda_switch_range():
    lam = lambda_switch_closed_form(SIMILAR_A, similar_B(0.65), 2.0)
    assert 0.02 < lam < 0.1


def test_lambda_switch_defining_equation():
    A, B = SIMILAR_A, similar_B(0.65)
    lam = lambda_switch_closed_form(A, B, 2.0)
    m = MarketSpec(2.0, lam)
    f0 = one_period_objective(A, B, m, 0.0).total
    fK = one_period_objective(A, B, m, 2.0).total
    assert abs(f0 - fK) < 1e-12 * f0


def test_lambda_switch_degenerate_for_twins():
    A = tech("A")
    with pytest.raises(DegenerateError):
        lambda_switch_closed_form(A, dataclasses.replace(A, name="B"), 2.0)


def test_alpha_switch_values():
    A, B = SIMILAR_A, similar_B(0.0)
    assert alpha_switch(A, B, 2.0, 0.0) == pytest.approx(0.596, abs=1e-3)
    assert alpha_switch(A, B, 2.0, 0.1) == pytest.approx(0.681, abs=1e-3)
    assert alpha_switch_closed_form(A, B, 2.0) == alpha_switch(A, B, 2.0, 0.0)


def test_alpha_switch_defining_equation():
    A, B = SIMILAR_A, similar_B(0.0)
    a = alpha_switch(A, B, 2.0, 0.1)
    m = MarketSpec(2.0, 0.1)
    Bs = dataclasses.replace(B, alpha=a)
    f0 = one_period_objective(A, Bs, m, 0.0).total
    fK = one_period_objective(A, Bs, m, 2.0).total
    assert abs(f0 - fK) < 1e-12 * f0


def test_alpha_switch_no_root():
    # B is hopelessly expensive: no exponent of B in range equalises the corners
    B = tech("B", c0=1e6, sigma=1.1)
    with pytest.raises(NoRootError):
        alpha_switch(SIMILAR_A, B, 2.0, 0.1, alpha_max=1.0)


def test_bisect_basic_and_no_root():
    assert bisect(lambda x: x * x - 2, 0.0, 2.0) == pytest.approx(math.sqrt(2), abs=1e-12)
    with pytest.raises(NoRootError):
        bisect(lambda x: x * x + 1, -1.0, 1.0)


SWEEP_SETTINGS = OptimizerSettings()


def alpha_spec(lam, K=2.0, steps=51, lo=0.0, hi=1.0):
    return SweepSpec(Axis("alphaB", lo, hi, steps), Problem(SIMILAR_A, similar_B(0.65), MarketSpec(K, lam)))


@pytest.mark.parametrize("lam", [0.0, 0.1])
def test_closed_form_agrees_with_located_switch(lam):
    switches = find_switch_along_sweep(alpha_spec(lam))
    assert len(switches) == 1
    exact = alpha_switch(SIMILAR_A, similar_B(0.0), 2.0, lam)
    assert switches[0].value == pytest.approx(exact, rel=1e-4)
    assert switches[0].verified


def test_lambda_switch_agrees_with_located_switch():
    base = Problem(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.05))
    switches = find_switch_along_sweep(SweepSpec(Axis("lambda", 0.0, 0.2, 41), base))
    assert len(switches) == 1
    assert switches[0].value == pytest.approx(lambda_switch_closed_form(SIMILAR_A, similar_B(0.65), 2.0), rel=1e-4)


def test_switch_symmetric_about_half_share():
    (sw,) = find_switch_along_sweep(alpha_spec(0.0))
    # a corner-to-corner switch pairs q* with K - q*
    assert sw.lower_location[0] == pytest.approx(2.0 - sw.upper_location[0], abs=1e-9)
    assert sw.value_gap < 1e-12


def test_alpha_switch_at_moderate_risk_aversion():
    (sw,) = find_switch_along_sweep(alpha_spec(0.25, steps=101))
    assert sw.value == pytest.approx(0.71, abs=0.01)
    assert sw.verified


def test_demand_switch():
    base = Problem(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.25))
    switches = find_switch_along_sweep(SweepSpec(Axis("K", 0.1, 10.0, 100), base))
    assert len(switches) == 1
    assert switches[0].value == pytest.approx(4.0, abs=0.5)
    assert switches[0].lower_location[0] / switches[0].value > 0.5
    assert switches[0].upper_location[0] / switches[0].value < 0.5


def test_no_switch_in_markowitz_limit():
    assert find_switch_along_sweep(alpha_spec(0.25, K=0.001, steps=101)) == []
    # dense confirmation that the optimum moves continuously
    shares = [
        optimize_one_period(SIMILAR_A, similar_B(a), MarketSpec(0.001, 0.25)).global_share
        for a in np.linspace(0, 1, 401)
    ]
    assert np.max(np.abs(np.diff(shares))) < 0.1


def test_switch_needs_single_axis():
    spec = SweepSpec(
        Axis("alphaB", 0, 1, 3),
        Problem(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.25)),
        Axis("lambda", 0, 1, 3),
    )
    with pytest.raises(DomainError):
        find_switch_along_sweep(spec)
