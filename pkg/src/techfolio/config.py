"""JSON run configuration: parsing, validation and defaults.

Layout::

    {
      "technologies": [{"name": "A", "c0": 2, "z0": 1, "alpha": 0.5, "sigma": 1.0},
                       {"name": "B", "c0": 2, "z0": 1, "alpha": 0.65, "sigma": 1.1}],
      "market": {"demand_K": 2, "lambda": 0.25, "rho": 0, "discount_r": 0, "periods": 1},
      "options": {...command specific...},
      "output": {"path": "out.csv", "format": "csv", "precision": 12}
    }

Every malformed or unknown key raises ``ConfigError`` naming its dotted path.
Values that parse but fall outside a parameter's domain raise the
library's own domain or range errors, prefixed with the same path.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .curves import MarketSpec, TechnologyParams
from .errors import ConfigError, TechfolioError
from .optimizer import OptimizerSettings

COMMANDS = ("optimize", "sweep", "frontier", "thresholds", "two-period", "scenarios", "validate-mc")
FORMATS = ("csv", "json")

_REQUIRED = object()


class Section:
    """Typed, path-aware reader over one JSON object."""

    def __init__(self, data: Any, path: str) -> None:
        if not isinstance(data, dict):
            raise ConfigError(f"{path or '<root>'}: expected an object")
        self.data = data
        self.path = path
        self.seen = set()

    def key(self, name: str) -> str:
        return f"{self.path}.{name}" if self.path else name

    def has(self, name: str) -> bool:
        return name in self.data

    def raw(self, name: str, default=_REQUIRED):
        self.seen.add(name)
        if name not in self.data:
            if default is _REQUIRED:
                raise ConfigError(f"{self.key(name)}: missing required key")
            return default
        return self.data[name]

    def number(self, name: str, default=_REQUIRED) -> float:
        value = self.raw(name, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{self.key(name)}: expected a number, got {value!r}")
        return float(value)

    def integer(self, name: str, default=_REQUIRED) -> int:
        value = self.raw(name, default)
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{self.key(name)}: expected an integer, got {value!r}")
        return value

    def boolean(self, name: str, default=_REQUIRED) -> bool:
        value = self.raw(name, default)
        if not isinstance(value, bool):
            raise ConfigError(f"{self.key(name)}: expected true or false, got {value!r}")
        return value

    def string(self, name: str, default=_REQUIRED, choices=None) -> Optional[str]:
        value = self.raw(name, default)
        if value is None and default is None:
            return None
        if not isinstance(value, str):
            raise ConfigError(f"{self.key(name)}: expected a string, got {value!r}")
        if choices is not None and value not in choices:
            raise ConfigError(f"{self.key(name)}: expected one of {list(choices)}, got {value!r}")
        return value

    def array(self, name: str, default=_REQUIRED) -> list:
        value = self.raw(name, default)
        if value is None and default is None:
            return None
        if not isinstance(value, list):
            raise ConfigError(f"{self.key(name)}: expected an array, got {value!r}")
        return value

    def numbers(self, name: str, default=_REQUIRED) -> Tuple[float, ...]:
        values = self.array(name, default)
        for k, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{self.key(name)}[{k}]: expected a number, got {v!r}")
        return tuple(float(v) for v in values)

    def section(self, name: str, default=_REQUIRED) -> Optional["Section"]:
        value = self.raw(name, default)
        if value is None and default is None:
            return None
        return Section(value, self.key(name))

    def finish(self) -> None:
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            raise ConfigError(f"{self.key(unknown[0])}: unknown key")


def built(path: str, factory, *args, **kwargs):
    """Construct a library object, tagging domain failures with ``path``."""
    try:
        return factory(*args, **kwargs)
    except TechfolioError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _technology(sec: Section) -> TechnologyParams:
    tech = built(
        sec.path,
        TechnologyParams,
        name=sec.string("name"),
        c0=sec.number("c0"),
        z0=sec.number("z0"),
        alpha=sec.number("alpha"),
        sigma=sec.number("sigma"),
    )
    sec.finish()
    return tech


def _market(sec: Section) -> MarketSpec:
    market = built(
        sec.path,
        MarketSpec,
        demand_K=sec.number("demand_K"),
        lam=sec.number("lambda"),
        rho=sec.number("rho", 0.0),
        discount_r=sec.number("discount_r", 0.0),
        periods=sec.integer("periods", 1),
    )
    sec.finish()
    return market


def _optimizer(sec: Optional[Section]) -> OptimizerSettings:
    if sec is None:
        return OptimizerSettings()
    defaults = OptimizerSettings()
    kwargs = {}
    for f in dataclasses.fields(OptimizerSettings):
        default = getattr(defaults, f.name)
        if isinstance(default, bool):
            kwargs[f.name] = sec.boolean(f.name, default)
        elif isinstance(default, int):
            kwargs[f.name] = sec.integer(f.name, default)
        else:
            kwargs[f.name] = sec.number(f.name, default)
    sec.finish()
    return built(sec.path, OptimizerSettings, **kwargs)


@dataclass(frozen=True)
class OutputSpec:
    path: Optional[str] = None
    format: str = "csv"
    precision: int = 12


def _output(sec: Optional[Section]) -> OutputSpec:
    if sec is None:
        return OutputSpec()
    out = OutputSpec(
        path=sec.string("path", None),
        format=sec.string("format", "csv", FORMATS),
        precision=sec.integer("precision", 12),
    )
    if not 1 <= out.precision <= 17:
        raise ConfigError(f"{sec.key('precision')}: expected 1..17 significant digits")
    sec.finish()
    return out


@dataclass(frozen=True)
class RunConfig:
    techA: TechnologyParams
    techB: TechnologyParams
    market: MarketSpec
    command: Optional[str]
    # still-unread options; each command consumes and finishes it
    options: Section
    settings: OptimizerSettings
    output: OutputSpec
    source: Dict[str, Any]


def parse_config(data: Any) -> RunConfig:
    root = Section(data, "")
    command = root.string("command", None, COMMANDS)
    techs = root.array("technologies")
    if len(techs) != 2:
        raise ConfigError(f"technologies: expected exactly two entries, got {len(techs)}")
    techA = _technology(Section(techs[0], "technologies[0]"))
    techB = _technology(Section(techs[1], "technologies[1]"))
    market = _market(root.section("market"))
    options = root.section("options", {})
    settings = _optimizer(options.section("optimizer", None))
    output = _output(root.section("output", None))
    root.finish()
    return RunConfig(techA, techB, market, command, options, settings, output, data)


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON config; I/O failures propagate as ``OSError``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"<root>: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    return parse_config(data)
