import os

import pytest
from hypothesis import HealthCheck, settings

from techfolio.curves import MarketSpec, TechnologyParams
from techfolio.presets import CHALLENGER_B, INCUMBENT_A, SIMILAR_A, similar_B

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def similar():
    """The near-identical pair with alpha_B = 0.65 and demand 2."""
    return SIMILAR_A, similar_B(0.65), MarketSpec(demand_K=2.0, lam=0.25)


@pytest.fixture
def incumbent():
    return INCUMBENT_A, CHALLENGER_B


def tech(name="T", c0=2.0, z0=1.0, alpha=0.5, sigma=1.0):
    return TechnologyParams(name, c0=c0, z0=z0, alpha=alpha, sigma=sigma)


# acceptance lines are collected here and echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
