"""Relativistic versus non-relativistic wave-packet dynamics for the rotor and hydrogen."""

__version__ = "0.1.0"

from .errors import ConfigError, ConsistencyError, DomainError, RangeError
from .numerics import ExtendedReal, compensated_complex_sum, reduce_phase
from .spectra import (
    AU_TIME_S,
    C_AU,
    HydrogenModel,
    LevelEnergies,
    RotorModel,
    Theory,
    Timescales,
    critical_time,
    hydrogen_levels,
    rotor_levels,
    timescales,
)
from .units import convert_units
from .wavepacket import (
    AutocorrTrace,
    CoefficientSet,
    EvolvedCoefficients,
    autocorrelation,
    autocorrelation_trace,
    evolve,
    gaussian_coefficients,
    make_times,
    shifted_time,
)

__all__ = [
    "AU_TIME_S", "C_AU", "AutocorrTrace", "CoefficientSet", "ConfigError", "ConsistencyError",
    "DomainError", "EvolvedCoefficients", "ExtendedReal", "HydrogenModel", "LevelEnergies",
    "RangeError", "RotorModel", "Theory", "Timescales", "autocorrelation", "autocorrelation_trace",
    "compensated_complex_sum", "convert_units", "critical_time", "evolve", "gaussian_coefficients",
    "hydrogen_levels", "make_times", "reduce_phase", "rotor_levels", "shifted_time", "timescales",
]
