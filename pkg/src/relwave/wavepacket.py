"""Gaussian superpositions of energy eigenstates and their exact phase evolution."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .numerics import ExtendedReal, compensated_complex_sum, reduce_phase
from .spectra import Theory, energy_derivatives


@dataclass(frozen=True)
class CoefficientSet:
    """Expansion amplitudes over a contiguous window of quantum numbers."""

    ns: np.ndarray
    amplitudes: np.ndarray
    nbar: float
    sigma0: float
    theta0: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self) -> int:
        return len(self.ns)


@dataclass(frozen=True)
class EvolvedCoefficients:
    """Amplitudes at one time (1-d) or at a series of times (2-d, time first)."""

    time: object
    theory: Theory
    ns: np.ndarray
    amplitudes: np.ndarray


@dataclass(frozen=True)
class AutocorrTrace:
    times: np.ndarray
    values: np.ndarray
    theory: Theory
    meta: dict = field(default_factory=dict)

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def default_half_width(sigma0: float) -> int:
    return math.ceil(6.0 / (sigma0 * math.sqrt(2.0))) + 2


def gaussian_coefficients(nbar, sigma0, theta0=0.0, window=None, n_min=None) -> CoefficientSet:
    """A_n = (2 s^2/pi)^(1/4) exp(-i n theta0) exp(-s^2 (n - nbar)^2), renormalised.

    The window is centred on ``round(nbar)``; entries below ``n_min`` are
    dropped before renormalisation.
    """
    if not sigma0 > 0:
        raise DomainError("sigma0 must be positive")
    hw = default_half_width(sigma0) if window is None else int(window)
    centre = int(round(nbar))
    lo = centre - hw
    if n_min is not None:
        lo = max(lo, int(n_min))
    ns = np.arange(lo, centre + hw + 1)
    if ns.size == 0:
        raise DomainError("empty coefficient window")
    nf = ns.astype(float)
    amp = (2 * sigma0 ** 2 / math.pi) ** 0.25 * np.exp(-1j * nf * theta0) * np.exp(
        -(sigma0 ** 2) * (nf - nbar) ** 2
    )
    norm = math.sqrt(math.fsum(np.abs(amp) ** 2))
    return CoefficientSet(ns, amp / norm, float(nbar), float(sigma0), float(theta0))


def make_times(center, half_width, step) -> ExtendedReal:
    """Uniform sample times center + k*step, |k*step| <= half_width, carried as double-double."""
    k = np.arange(-math.floor(half_width / step + 1e-9), math.floor(half_width / step + 1e-9) + 1)
    return ExtendedReal.of(center) + ExtendedReal.of(k.astype(float)) * ExtendedReal.of(step)


def _phases(coeffs: CoefficientSet, model, t, theory):
    energy = model.levels(coeffs.ns).energy(theory)
    tt = ExtendedReal.of(t)
    if np.ndim(tt.hi) == 0:
        return reduce_phase(energy, tt)
    t_col = ExtendedReal(np.asarray(tt.hi)[:, None], np.asarray(tt.lo)[:, None])
    e_row = ExtendedReal(np.asarray(energy.hi)[None, :], np.asarray(energy.lo)[None, :])
    return reduce_phase(e_row, t_col)


def evolve(coeffs: CoefficientSet, model, t, theory) -> EvolvedCoefficients:
    """Multiply each amplitude by exp(-i E_n t) with E_n from ``theory``.

    ``t`` may be a scalar or a 1-d array (float or ExtendedReal); an array
    gives a 2-d amplitude table indexed [time, mode].
    """
    theory = Theory(theory)
    ph = _phases(coeffs, model, t, theory)
    amps = coeffs.amplitudes * np.exp(-1j * ph)
    return EvolvedCoefficients(t, theory, coeffs.ns, amps)


def autocorrelation(coeffs: CoefficientSet, model, t, theory):
    """C(t) = sum_n |A_n|^2 exp(+i E_n t) for the chosen theory."""
    ph = _phases(coeffs, model, t, Theory(theory))
    terms = coeffs.probabilities * np.exp(1j * ph)
    return compensated_complex_sum(terms, axis=-1)


def overlap(evolved: EvolvedCoefficients, initial: CoefficientSet):
    """<psi(t)|psi(0)> as the coefficient inner product sum conj(A_n(t)) A_n(0)."""
    return compensated_complex_sum(np.conj(evolved.amplitudes) * initial.amplitudes, axis=-1)


def autocorrelation_trace(coeffs: CoefficientSet, model, times, theory, chunk: int = 4096) -> AutocorrTrace:
    times = ExtendedReal.of(times)
    hi = np.atleast_1d(np.asarray(times.hi, dtype=float))
    lo = np.atleast_1d(np.asarray(times.lo, dtype=float)) * np.ones_like(hi)
    out = np.empty(hi.size, dtype=complex)
    for i in range(0, hi.size, chunk):
        out[i:i + chunk] = autocorrelation(coeffs, model, ExtendedReal(hi[i:i + chunk], lo[i:i + chunk]), theory)
    return AutocorrTrace(hi + lo, out, Theory(theory))


def shifted_time(t, model, nbar):
    """t' = t (1 - delta/E) at level ``nbar``; C_NR(t) is close to C_REL(t')."""
    lev = model.levels(np.array(int(nbar)))
    e = float(lev.E_rel)
    if e == 0:
        raise DomainError("E_rel(nbar) is zero")
    return t * (1.0 - float(lev.delta_value) / e)


def shift_fraction(model, nbar) -> float:
    """delta/E_rel at ``nbar``, the fractional time shift between the two theories."""
    lev = model.levels(np.array(int(nbar)))
    e = float(lev.E_rel)
    if e == 0:
        raise DomainError("E_rel(nbar) is zero")
    return float(lev.delta_value) / e


def envelope_shift_fraction(model, nbar) -> float:
    """(d delta/dn) / (dE_nr/dn) at ``nbar``.

    The linear-in-n part of the phase mismatch delta_n*t displaces the
    classical-period peak train; this ratio is the resulting fractional shift
    of peak positions, which for hydrogen is ~1.5x ``shift_fraction``.
    """
    d_rel = energy_derivatives(model, nbar, Theory.REL)[0]
    d_nr = energy_derivatives(model, nbar, Theory.NR)[0]
    return float((d_rel - d_nr) / d_nr)
