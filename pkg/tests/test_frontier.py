import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from techfolio.analysis import (
    MarkowitzAsset,
    feasible_set,
    lambda_scan,
    markowitz_reference,
    markowitz_weight,
)
from techfolio.analysis.frontier import components_of, scan_efficient, supporting_intervals
from techfolio.analysis.markowitz import markowitz_objective
from techfolio.curves import MarketSpec
from techfolio.errors import DomainError
from techfolio.presets import SIMILAR_A, similar_B

from conftest import tech


@pytest.mark.parametrize("K,expected", [(0.1, 1), (1.0, None), (2.0, 2)])
def test_component_counts(K, expected):
    fs = feasible_set(SIMILAR_A, similar_B(0.65), MarketSpec(K, 0.25), n_points=1001)
    if expected is not None:
        assert fs.n_components == expected
    if K == 2.0:
        assert fs.components[0][0] == 0


def test_small_demand_set_is_near_parabolic():
    fs = feasible_set(SIMILAR_A, similar_B(0.65), MarketSpec(0.1, 0.25), n_points=201)
    q = np.array([p.qA for p in fs.points])
    V = np.array([p.variance for p in fs.points])
    coef = np.polyfit(q, V, 2)
    resid = V - np.polyval(coef, q)
    assert np.max(np.abs(resid)) < 0.02 * np.ptp(V)


def test_zero_noise_degenerates_to_segment():
    A = tech("A", sigma=0.0)
    B = tech("B", alpha=0.65, sigma=0.0)
    fs = feasible_set(A, B, MarketSpec(2.0, 0.25), n_points=101)
    assert all(p.variance == 0 for p in fs.points)
    E = [p.expectation for p in fs.points]
    flagged = [k for k, p in enumerate(fs.points) if p.efficient]
    assert flagged == [int(np.argmin(E))]
    assert fs.n_components == 1


def test_scan_soundness():
    fs = feasible_set(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.25), n_points=401)
    E = np.array([p.expectation for p in fs.points])
    V = np.array([p.variance for p in fs.points])
    winners = set()
    for lam in lambda_scan():
        vals = E + lam * V
        winners |= set(np.flatnonzero(vals <= vals.min() + 1e-12 * abs(vals.min())))
    assert {k for k, p in enumerate(fs.points) if p.efficient} == winners


def test_supporting_intervals_contain_scan_hits():
    fs = feasible_set(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.25), n_points=401)
    for k, p in enumerate(fs.points):
        if p.efficient:
            assert not np.isnan(fs.lambda_lo[k])


def test_supporting_intervals_small_example():
    # points (V, E): (0, 3), (1, 1), (4, 0), (2, 2) dominated
    E = np.array([3.0, 1.0, 0.0, 2.0])
    V = np.array([0.0, 1.0, 4.0, 2.0])
    lo, hi = supporting_intervals(E, V)
    assert lo[0] == pytest.approx(2.0) and hi[0] == np.inf
    assert lo[1] == pytest.approx(1 / 3) and hi[1] == pytest.approx(2.0)
    assert lo[2] == 0.0 and hi[2] == pytest.approx(1 / 3)
    assert np.isnan(lo[3])


def test_components_of():
    assert components_of(np.array([1, 1, 0, 1, 0, 0, 1], bool)) == ((0, 1), (3, 3), (6, 6))
    assert components_of(np.zeros(3, bool)) == ()


def test_feasible_set_validation():
    with pytest.raises(DomainError):
        feasible_set(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.25), n_points=1)
    with pytest.raises(DomainError):
        feasible_set(SIMILAR_A, similar_B(0.65), MarketSpec(2.0, 0.25, periods=2), n_points=11)


def test_markowitz_examples():
    assert markowitz_weight(MarkowitzAsset(0.5, 1.0), MarkowitzAsset(0.65, 1.1), 0.0) == (0.0, False)
    assert markowitz_weight(MarkowitzAsset(0.5, 1.0), MarkowitzAsset(0.5, 1.0), 0.7) == (0.5, False)
    assert markowitz_weight(MarkowitzAsset(0.5, 1.0), MarkowitzAsset(0.5, 1.1), 0.0) == (0.5, True)
    with pytest.raises(DomainError):
        markowitz_weight(MarkowitzAsset(0.5, 1.0), MarkowitzAsset(0.5, 1.0), -1.0)


@given(st.floats(0, 2), st.floats(0, 2), st.floats(0.01, 5), st.floats(0.01, 5), st.floats(0, 10))
def test_markowitz_weight_is_optimal(muA, muB, sA, sB, lam):
    a, b = MarkowitzAsset(muA, sA), MarkowitzAsset(muB, sB)
    w, _ = markowitz_weight(a, b, lam)
    grid = np.linspace(0, 1, 2001)
    best = markowitz_objective(a, b, lam, grid).max()
    assert markowitz_objective(a, b, lam, w) >= best - 1e-12 * max(1.0, abs(best))


def test_markowitz_surface_continuous_for_positive_lambda():
    a = MarkowitzAsset(0.5, 1.0)
    mus = np.linspace(0.0, 1.0, 101)
    for lam in np.linspace(0.01, 1.0, 25):
        w = np.array([markowitz_weight(a, MarkowitzAsset(m, 1.1), lam)[0] for m in mus])
        # slope bounded by 1 / (2 lam (sA^2 + sB^2)) per unit mu
        bound = (mus[1] - mus[0]) / (2 * lam * (1.0 + 1.21))
        assert np.max(np.abs(np.diff(w))) <= bound + 1e-12


def test_markowitz_bullet():
    res = markowitz_reference(MarkowitzAsset(0.5, 1.0), MarkowitzAsset(0.65, 1.1), 0.25, n_points=101)
    assert len(res.feasible) == 101
    # efficient arm runs from all-B (highest mean) to the sampled minimum-variance point
    V = np.array([p.variance for p in res.feasible])
    assert len(res.components) == 1
    assert res.components[0] == (0, int(np.argmin(V)))
    assert abs(res.feasible[int(np.argmin(V))].qA - 1.21 / 2.21) < 0.01
    assert res.feasible[0].efficient and not res.feasible[-1].efficient
