"""Time-unit conversion between atomic units and SI submultiples."""
from __future__ import annotations

from .errors import DomainError
from .spectra import AU_TIME_S

_SECONDS = {
    "au": AU_TIME_S,
    "a.u.": AU_TIME_S,
    "s": 1.0,
    "ms": 1e-3,
    "ns": 1e-9,
    "ps": 1e-12,
}

TIME_UNITS = tuple(_SECONDS)


def convert_units(value, from_unit: str, to_unit: str):
    """Convert a time between ``au``, ``s``, ``ms``, ``ns`` and ``ps``."""
    try:
        a, b = _SECONDS[from_unit], _SECONDS[to_unit]
    except KeyError as exc:
        raise DomainError(f"unknown time unit {exc.args[0]!r}") from None
    if a == b:
        return value
    return value * (a / b) if a > b else value / (b / a)
