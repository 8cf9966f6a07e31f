from .frontier import FeasibleSet, FrontierPoint, feasible_set, lambda_scan
from .markowitz import MarkowitzAsset, MarkowitzResult, markowitz_reference, markowitz_weight
from .scenarios import Crossing, ScenarioComparison, scenario_compare
from .sweep import (
    Axis,
    Problem,
    SweepResult,
    SweepSpec,
    Switch,
    apply_parameter,
    find_switch_along_sweep,
    sweep_optimal_share,
)
from .thresholds import (
    A_CORNER,
    B_CORNER,
    alpha_switch,
    alpha_switch_closed_form,
    lambda_diversification,
    lambda_switch_closed_form,
)

__all__ = [
    "A_CORNER",
    "B_CORNER",
    "Axis",
    "Crossing",
    "FeasibleSet",
    "FrontierPoint",
    "MarkowitzAsset",
    "MarkowitzResult",
    "Problem",
    "ScenarioComparison",
    "SweepResult",
    "SweepSpec",
    "Switch",
    "alpha_switch",
    "alpha_switch_closed_form",
    "apply_parameter",
    "feasible_set",
    "find_switch_along_sweep",
    "lambda_diversification",
    "lambda_scan",
    "lambda_switch_closed_form",
    "markowitz_reference",
    "markowitz_weight",
    "scenario_compare",
    "sweep_optimal_share",
]
