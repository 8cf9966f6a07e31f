"""Exception hierarchy. The CLI maps each family to an exit status."""


class TechfolioError(Exception):
    pass


class ConfigError(TechfolioError):
    """Unparseable or incomplete run configuration."""


class DomainError(TechfolioError, ValueError):
    """An input lies outside the model's domain."""


class UnsupportedFeatureError(DomainError):
    pass


class DegenerateError(DomainError):
    """A closed form has a vanishing denominator (e.g. 0/0 for twin technologies)."""


class NoRootError(DomainError):
    """A bracket has no sign change, so no root can be located."""


class NumericRangeError(TechfolioError, ArithmeticError):
    """A computation would overflow or otherwise leave the representable range."""
