"""Optimal production portfolios of two technologies on stochastic experience curves."""

from .curves import (
    CostMoments,
    MarketSpec,
    TechnologyParams,
    TwoPeriodMoments,
    cost_moments,
    sample_cost_paths,
    two_period_cost_moments,
    unit_cost_expectation,
    unit_cost_variance,
)
from .objective import (
    ObjectiveValue,
    PortfolioShare,
    markowitz_zeroth_order,
    one_period_objective,
    safe_technology_minimum,
    safe_technology_objective,
    series_first_order,
    two_period_objective,
)
from .optimizer import (
    LocalOptimum,
    OptimizationResult,
    OptimizerSettings,
    classify_solution,
    optimize_one_period,
    optimize_two_period,
)

__version__ = "0.1.0"
