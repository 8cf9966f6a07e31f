"""Command-line front end.

    techfolio <command> --config FILE [--out PATH] [--format csv|json]
                        [--threads N] [--seed N]

Exit status: 0 success, 2 configuration error, 3 domain error,
4 numeric range error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from .analysis import (
    Axis,
    MarkowitzAsset,
    Problem,
    SweepSpec,
    alpha_switch,
    feasible_set,
    find_switch_along_sweep,
    lambda_diversification,
    lambda_switch_closed_form,
    markowitz_reference,
    scenario_compare,
    sweep_optimal_share,
)
from .analysis.sweep import JUMP_THRESHOLD, SWITCH_REL_WIDTH
from .analysis.thresholds import A_CORNER, B_CORNER
from .config import COMMANDS, FORMATS, RunConfig, Section, built, load_config
from .errors import ConfigError, DomainError, NumericRangeError
from .montecarlo import oracle_checks
from .objective import PortfolioShare, one_period_components, portfolio_objective, two_period_components
from .optimizer import optimize
from .output import Table, surface_table, to_csv, to_json, write_atomic

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_RANGE = 4
EXIT_IO = 5


class Context:
    def __init__(self, config: RunConfig, threads: int, seed: Optional[int]) -> None:
        self.config = config
        self.threads = threads
        self.seed = seed

    @property
    def opts(self) -> Section:
        return self.config.options

    @property
    def problem(self) -> Problem:
        c = self.config
        return Problem(c.techA, c.techB, c.market)


def _axis(sec: Section) -> Axis:
    axis = built(
        sec.path,
        Axis,
        name=sec.string("name"),
        start=sec.number("start"),
        stop=sec.number("stop"),
        steps=sec.integer("steps"),
    )
    sec.finish()
    return axis


def _axis_dict(axis: Optional[Axis]):
    return None if axis is None else dataclasses.asdict(axis)


def _optima_table(result, problem: Problem) -> Table:
    two = problem.market.periods == 2
    header = (
        ["q1A", "q2A"] if two else ["qA", "qA_share"]
    ) + ["value", "expectation", "variance", "kind", "is_global"]
    rows = []
    for opt in result.optima:
        val = portfolio_objective(problem.techA, problem.techB, problem.market, opt.location)
        loc = list(opt.location)
        if not two:
            loc.append(opt.location[0] / result.K if result.K > 0 else float("nan"))
        rows.append(
            loc + [opt.value, val.expectation_component, val.variance_component, opt.kind, opt.is_global]
        )
    return Table(
        header,
        rows,
        meta={"grid_resolution": result.grid_resolution, "refined": result.refined, "tie": result.tie},
    )


def cmd_optimize(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    report = ctx.opts.string("report", "optima", ("optima", "curve"))
    points = ctx.opts.integer("curve_points", 201)
    ctx.opts.finish()
    p = ctx.problem
    if report == "optima":
        result = optimize(p.techA, p.techB, p.market, ctx.config.settings)
        return _optima_table(result, p), {"report": report}
    if p.market.periods != 1:
        raise ConfigError("options.report: curve output is one-period; use two-period surface")
    if points < 2:
        raise ConfigError("options.curve_points: expected >= 2")
    qs = np.linspace(0.0, p.market.demand_K, points)
    E, V = one_period_components(p.techA, p.techB, p.market, qs)
    E = np.broadcast_to(E, qs.shape)
    V = np.broadcast_to(V, qs.shape)
    rows = [
        [float(q), float(e + p.market.lam * v), float(e), float(v)] for q, e, v in zip(qs, E, V)
    ]
    table = Table(["qA", "value", "expectation", "variance"], rows)
    return table, {"report": report, "curve_points": points}


def cmd_two_period(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    if ctx.config.market.periods != 2:
        raise ConfigError("market.periods: the two-period command needs periods = 2")
    report = ctx.opts.string("report", "optima", ("optima", "surface"))
    steps = ctx.opts.integer("surface_steps", 31)
    ctx.opts.finish()
    p = ctx.problem
    if report == "optima":
        result = optimize(p.techA, p.techB, p.market, ctx.config.settings)
        return _optima_table(result, p), {"report": report}
    if steps < 2:
        raise ConfigError("options.surface_steps: expected >= 2")
    qs = np.linspace(0.0, p.market.demand_K, steps)
    Q1, Q2 = np.meshgrid(qs, qs, indexing="ij")
    E, V = two_period_components(p.techA, p.techB, p.market, Q1, Q2)
    F = E + p.market.lam * V
    rows = [
        [float(Q1[i, j]), float(Q2[i, j]), float(F[i, j]), float(E[i, j]), float(V[i, j])]
        for i in range(steps)
        for j in range(steps)
    ]
    table = Table(["q1A", "q2A", "value", "expectation", "variance"], rows)
    return table, {"report": report, "surface_steps": steps}


def cmd_sweep(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    opts = ctx.opts
    axis1 = _axis(opts.section("axis1"))
    axis2_sec = opts.section("axis2", None)
    axis2 = _axis(axis2_sec) if axis2_sec is not None else None
    jump = opts.number("jump_threshold", JUMP_THRESHOLD)
    report = opts.string("report", "surface", ("surface", "optima", "switches"))
    rel_width = opts.number("switch_rel_width", SWITCH_REL_WIDTH)
    opts.finish()
    if jump <= 0:
        raise ConfigError("options.jump_threshold: expected > 0")
    spec = built("options", SweepSpec, axis1, ctx.problem, axis2)
    resolved = {
        "axis1": _axis_dict(axis1),
        "axis2": _axis_dict(axis2),
        "jump_threshold": jump,
        "report": report,
        "switch_rel_width": rel_width,
    }
    if report == "surface":
        sweep = sweep_optimal_share(spec, ctx.config.settings, ctx.threads, jump)
        table = surface_table(sweep)
        table.meta["failed_nodes"] = [
            {"axis1": n.axis1, "axis2": n.axis2, "error": n.error}
            for row in sweep.nodes
            for n in row
            if n.failed
        ]
        return table, resolved
    if report == "optima":
        sweep = sweep_optimal_share(spec, ctx.config.settings, ctx.threads, jump)
        two = ctx.config.market.periods == 2
        header = ["axis1", "axis2"] + (["q1A", "q2A"] if two else ["qA"])
        header += ["value", "kind", "is_global"]
        rows = []
        for row in sweep.nodes:
            for n in row:
                if n.failed:
                    continue
                for o in n.result.optima:
                    rows.append([n.axis1, n.axis2, *o.location, o.value, o.kind, o.is_global])
        return Table(header, rows, float_mode="shortest"), resolved
    if axis2 is not None:
        raise ConfigError("options.axis2: switch location needs a single-axis sweep")
    switches = find_switch_along_sweep(spec, ctx.config.settings, ctx.threads, jump, rel_width)
    rows = [
        [s.parameter, s.value, s.lower_location, s.upper_location, s.value_gap, s.verified]
        for s in switches
    ]
    header = ["parameter", "value", "lower_location", "upper_location", "value_gap", "verified"]
    return Table(header, rows), resolved


def _component_labels(n: int, components) -> List[int]:
    labels = [-1] * n
    for k, (lo, hi) in enumerate(components):
        for i in range(lo, hi + 1):
            labels[i] = k
    return labels


def _asset(sec: Section) -> MarkowitzAsset:
    asset = built(sec.path, MarkowitzAsset, mu=sec.number("mu"), s=sec.number("s"))
    sec.finish()
    return asset


def cmd_frontier(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    opts = ctx.opts
    model = opts.string("model", "technology", ("technology", "markowitz"))
    n_points = opts.integer("n_points", 1001)
    assets = opts.array("assets", None) if model == "markowitz" else None
    if model == "markowitz":
        if assets is None or len(assets) != 2:
            raise ConfigError("options.assets: markowitz model needs exactly two assets")
        assetA = _asset(Section(assets[0], "options.assets[0]"))
        assetB = _asset(Section(assets[1], "options.assets[1]"))
    opts.finish()
    if n_points < 2:
        raise ConfigError("options.n_points: expected >= 2")
    resolved = {"model": model, "n_points": n_points}
    header = ["qA", "variance", "expectation", "efficient", "component"]
    if model == "markowitz":
        resolved["assets"] = [dataclasses.asdict(assetA), dataclasses.asdict(assetB)]
        res = markowitz_reference(assetA, assetB, ctx.config.market.lam, n_points)
        labels = _component_labels(len(res.feasible), res.components)
        rows = [
            [p.qA, p.variance, p.expectation, p.efficient, c]
            for p, c in zip(res.feasible, labels)
        ]
        meta = {"weight": res.weight, "tie": res.tie, "n_components": len(res.components)}
        return Table(header, rows, meta=meta), resolved
    p = ctx.problem
    fs = built("market", feasible_set, p.techA, p.techB, p.market, n_points)
    labels = _component_labels(len(fs.points), fs.components)
    rows = [
        [pt.qA, pt.variance, pt.expectation, pt.efficient, c, float(lo), float(hi)]
        for pt, c, lo, hi in zip(fs.points, labels, fs.lambda_lo, fs.lambda_hi)
    ]
    return (
        Table(header + ["lambda_lo", "lambda_hi"], rows, meta={"n_components": fs.n_components}),
        resolved,
    )


THRESHOLD_QUANTITIES = ("lambda_diversification", "lambda_switch", "alpha_switch")


def cmd_thresholds(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    opts = ctx.opts
    m = ctx.config.market
    quantities = opts.array("quantities", list(THRESHOLD_QUANTITIES))
    for k, q in enumerate(quantities):
        if q not in THRESHOLD_QUANTITIES:
            raise ConfigError(f"options.quantities[{k}]: unknown quantity {q!r}")
    lambdas = opts.numbers("alpha_switch_lambdas", [m.lam])
    alpha_max = opts.number("alpha_max", 3.0)
    opts.finish()
    A, B, K = ctx.config.techA, ctx.config.techB, m.demand_K
    rows = []
    if "lambda_diversification" in quantities:
        for corner in (B_CORNER, A_CORNER):
            rows.append(["lambda_diversification", corner, lambda_diversification(A, B, K, corner)])
    if "lambda_switch" in quantities:
        rows.append(["lambda_switch", "closed-form", lambda_switch_closed_form(A, B, K)])
    if "alpha_switch" in quantities:
        for lam in lambdas:
            rows.append(["alpha_switch", f"lambda={lam!r}", alpha_switch(A, B, K, lam, alpha_max)])
    resolved = {
        "quantities": list(quantities),
        "alpha_switch_lambdas": list(lambdas),
        "alpha_max": alpha_max,
    }
    return Table(["quantity", "variant", "value"], rows), resolved


def _scenario(sec: Section, K: float) -> Tuple[str, PortfolioShare]:
    name = sec.string("name")
    if sec.has("q_A") == sec.has("share_A"):
        raise ConfigError(f"{sec.path}: give exactly one of q_A or share_A")
    if sec.has("q_A"):
        q = sec.numbers("q_A")
    else:
        q = tuple(s * K for s in sec.numbers("share_A"))
    sec.finish()
    return name, built(sec.path, PortfolioShare, q)


def cmd_scenarios(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    opts = ctx.opts
    m = ctx.config.market
    if m.periods != 2:
        raise ConfigError("market.periods: the scenarios command needs periods = 2")
    raw = opts.array("scenarios")
    if not raw:
        raise ConfigError("options.scenarios: expected at least one scenario")
    named = [_scenario(Section(s, f"options.scenarios[{k}]"), m.demand_K) for k, s in enumerate(raw)]
    r_sec = opts.section("r")
    r_axis = {"start": r_sec.number("start"), "stop": r_sec.number("stop"), "steps": r_sec.integer("steps")}
    r_sec.finish()
    report = opts.string("report", "values", ("values", "crossings"))
    opts.finish()
    if r_axis["steps"] < 2:
        raise ConfigError("options.r.steps: expected >= 2")
    names = [n for n, _ in named]
    if len(set(names)) != len(names):
        raise ConfigError("options.scenarios: scenario names must be distinct")
    rs = np.linspace(r_axis["start"], r_axis["stop"], r_axis["steps"])
    p = ctx.problem
    comp = built("options", scenario_compare, p.techA, p.techB, m, [s for _, s in named], rs)
    resolved = {
        "scenarios": [{"name": n, "q_A": list(s.q_A_per_period)} for n, s in named],
        "r": r_axis,
        "report": report,
    }
    if report == "crossings":
        rows = [[c.r, names[c.first], names[c.second]] for c in comp.crossings]
        return Table(["r", "first", "second"], rows), resolved
    rows = [
        [float(r)] + [float(v) for v in comp.values[:, k]] + [names[int(comp.preferred[k])]]
        for k, r in enumerate(rs)
    ]
    return Table(["r"] + names + ["preferred"], rows), resolved


def _mc_rows(ctx: Context, shares: PortfolioShare, n: int, seed: int, n_se: float):
    c = ctx.config
    return [
        [seed, k.quantity, k.analytic, k.estimate.mean, k.estimate.std_error,
         k.estimate.z_score(k.analytic), k.estimate.agrees(k.analytic, n_se)]
        for k in oracle_checks(c.techA, c.techB, c.market, shares, n, seed)
    ]


def cmd_validate_mc(ctx: Context) -> Tuple[Table, Dict[str, Any]]:
    opts = ctx.opts
    m = ctx.config.market
    n = opts.integer("n_samples", 1_000_000)
    trials = opts.integer("trials", 1)
    seed = opts.integer("seed", 0)
    n_se = opts.number("n_se", 3.0)
    q = opts.numbers("shares", [m.demand_K / 2] * m.periods)
    opts.finish()
    if ctx.seed is not None:
        seed = ctx.seed
    if n < 2:
        raise ConfigError("options.n_samples: expected >= 2")
    if trials < 1:
        raise ConfigError("options.trials: expected >= 1")
    shares = built("options.shares", PortfolioShare, q)
    built("options.shares", shares.validate, m)
    rows = []
    for t in range(trials):
        rows.extend(_mc_rows(ctx, shares, n, seed + t, n_se))
    header = ["seed", "quantity", "analytic", "estimate", "std_error", "z_score", "within"]
    passed = sum(1 for r in rows if r[-1])
    resolved = {"n_samples": n, "trials": trials, "seed": seed, "n_se": n_se, "shares": list(q)}
    return Table(header, rows, meta={"n_within": passed, "n_checks": len(rows)}), resolved


HANDLERS = {
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "frontier": cmd_frontier,
    "thresholds": cmd_thresholds,
    "two-period": cmd_two_period,
    "scenarios": cmd_scenarios,
    "validate-mc": cmd_validate_mc,
}


def _tech_dict(t) -> Dict[str, Any]:
    return dataclasses.asdict(t)


def _resolved_config(cfg: RunConfig, command: str, options: Dict[str, Any], fmt: str, out) -> Dict[str, Any]:
    m = cfg.market
    return {
        "command": command,
        "technologies": [_tech_dict(cfg.techA), _tech_dict(cfg.techB)],
        "market": {
            "demand_K": m.demand_K,
            "lambda": m.lam,
            "rho": m.rho,
            "discount_r": m.discount_r,
            "periods": m.periods,
        },
        "options": {**options, "optimizer": dataclasses.asdict(cfg.settings)},
        "output": {"path": out, "format": fmt, "precision": cfg.output.precision},
    }


def run(command: str, config_path: str, out: Optional[str] = None, fmt: Optional[str] = None,
        threads: int = 1, seed: Optional[int] = None) -> int:
    """Execute one command; raises library errors for ``main`` to map."""
    cfg = load_config(config_path)
    if cfg.command is not None and cfg.command != command:
        raise ConfigError(f"command: config is for {cfg.command!r}, invoked as {command!r}")
    if threads < 0:
        raise ConfigError("--threads: expected >= 0")
    fmt = fmt or cfg.output.format
    out = out if out is not None else cfg.output.path
    table, options = HANDLERS[command](Context(cfg, threads, seed))
    if fmt == "csv":
        text = to_csv(table, cfg.output.precision)
    else:
        meta = {
            "tool": "techfolio",
            "version": __version__,
            "config": _resolved_config(cfg, command, options, fmt, out),
        }
        text = to_json(table, meta, cfg.output.precision)
    write_atomic(out, text)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="techfolio",
        description="Optimal production portfolios of two technologies on stochastic experience curves.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="output path (default: config output.path, else stdout)")
    parser.add_argument("--format", choices=FORMATS, help="override output.format")
    parser.add_argument("--threads", type=int, default=1, help="sweep worker threads, 0 = auto")
    parser.add_argument("--seed", type=int, help="override the Monte Carlo seed")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _diagnose(kind: str, exc: BaseException) -> None:
    msg = " ".join(str(exc).split()) or type(exc).__name__
    print(f"techfolio: {kind} error: {msg}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return run(args.command, args.config, args.out, args.format, args.threads, args.seed)
    except ConfigError as exc:
        _diagnose("config", exc)
        return EXIT_CONFIG
    except (NumericRangeError, ArithmeticError) as exc:
        _diagnose("numeric range", exc)
        return EXIT_RANGE
    except (DomainError, ValueError) as exc:
        _diagnose("domain", exc)
        return EXIT_DOMAIN
    except OSError as exc:
        _diagnose("I/O", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
