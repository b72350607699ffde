"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(OverflowError):
    """Result magnitude exceeds what the arithmetic can represent accurately."""


class ConsistencyError(ArithmeticError):
    """An internal numerical cross-check failed."""


class ConfigError(ValueError):
    """Invalid run configuration."""
