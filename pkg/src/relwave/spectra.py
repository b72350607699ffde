"""Dirac and Schroedinger/Pauli spectra for the free rotor and hydrogen.

Everything is in Hartree atomic units (hbar = e = 1, alpha = 1/c).  Energies
have the rest mass subtracted.  The level difference ``delta = E_rel - E_nr``
is the quantity every downstream routine consumes, so it is computed from
cancellation-free closed forms and the relativistic energy is rebuilt as
``E_nr + delta`` in double-double.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import (
    ExtendedReal,
    inv_sqrt1p_minus_one,
    sqrt1p_minus_one,
    sqrt1p_minus_one_minus_half,
)

HBAR = 1.0
C_AU = 137.035999037
AU_TIME_S = 2.418884326509e-17


class Theory(str, enum.Enum):
    REL = "REL"
    NR = "NR"


@dataclass(frozen=True)
class LevelEnergies:
    """Energies of one or more levels; ``n`` may be a scalar or an array.

    ``e_nr`` and ``delta`` are double-double; ``e_rel`` is their sum.
    """

    n: np.ndarray
    e_nr: ExtendedReal
    delta: ExtendedReal

    @property
    def e_rel(self) -> ExtendedReal:
        return self.e_nr + self.delta

    @property
    def E_rel(self):
        return self.e_rel.to_float()

    @property
    def E_nr(self):
        return self.e_nr.to_float()

    @property
    def delta_value(self):
        return self.delta.to_float()

    def energy(self, theory: Theory) -> ExtendedReal:
        return self.e_rel if Theory(theory) is Theory.REL else self.e_nr

    @property
    def relative_difference(self):
        """(E_rel - E_nr) / E_rel, the quantity plotted against n for hydrogen."""
        return self.delta_value / self.E_rel


@dataclass(frozen=True)
class RotorModel:
    """Electron on a ring of radius ``R`` (bohr)."""

    R: float = 1000.0
    c: float = C_AU
    m0: float = 1.0

    def __post_init__(self):
        if not (self.R > 0 and self.c > 0 and self.m0 > 0):
            raise DomainError("RotorModel requires R, c, m0 > 0")

    @property
    def kind(self) -> str:
        return "rotor"

    def x(self, n):
        n = np.asarray(n, dtype=float)
        return (HBAR * n) ** 2 / (self.m0 * self.c * self.R) ** 2

    def levels(self, n) -> LevelEnergies:
        return rotor_levels(self, n)

    def min_n(self):
        return None


@dataclass(frozen=True)
class HydrogenModel:
    """Hydrogen atom restricted to fixed orbital ``l`` and total ``j``."""

    j: float = 0.5
    l: int = 1
    c: float = C_AU
    m0: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and self.m0 > 0):
            raise DomainError("HydrogenModel requires c, m0 > 0")
        if self.l < 0 or int(self.l) != self.l:
            raise DomainError("l must be a non-negative integer")
        if not any(math.isclose(self.j, v) for v in (abs(self.l - 0.5), self.l + 0.5)):
            raise DomainError(f"j={self.j} incompatible with l={self.l}")
        if (self.j + 0.5) ** 2 <= self.alpha ** 2:
            raise DomainError("(j + 1/2)^2 must exceed alpha^2")

    @property
    def kind(self) -> str:
        return "hydrogen"

    @property
    def alpha(self) -> float:
        return 1.0 / self.c

    def levels(self, n) -> LevelEnergies:
        return hydrogen_levels(self, n)

    def min_n(self) -> int:
        return int(self.l) + 1


def rotor_levels(model: RotorModel, n) -> LevelEnergies:
    n_arr = np.asarray(n)
    nf = n_arr.astype(float)
    x = model.x(nf)
    mc2 = model.m0 * model.c ** 2
    e_nr = ExtendedReal.of((HBAR * nf) ** 2) / ExtendedReal.of(2.0 * model.m0 * model.R ** 2)
    delta = mc2 * sqrt1p_minus_one_minus_half(x)
    if n_arr.ndim == 0:
        delta = float(delta)
    return LevelEnergies(n_arr, e_nr, ExtendedReal.of(delta))


def rotor_rel_energy_direct(model: RotorModel, n):
    """E_rel from sqrt1p_minus_one alone; used to cross-check ``E_nr + delta``."""
    return model.m0 * model.c ** 2 * sqrt1p_minus_one(model.x(n))


def _dirac_D(n, j, alpha):
    # D = n - (j + 1/2) + sqrt((j + 1/2)^2 - alpha^2), split as n + offset
    kappa = j + 0.5
    root = math.sqrt(kappa * kappa - alpha * alpha)
    offset = -(alpha * alpha) / (root + kappa)  # = root - kappa without cancellation
    return np.asarray(n, dtype=float) + offset, offset


def dirac_hydrogen_energy(n, j: float, c: float = C_AU, m0: float = 1.0):
    """Rest-mass-subtracted Dirac energy of hydrogen level (n, j)."""
    n = np.asarray(n, dtype=float)
    if np.any(n < j + 0.5) or np.any(n != np.round(n)):
        raise DomainError("require integer n >= j + 1/2")
    alpha = 1.0 / c
    D, _ = _dirac_D(n, j, alpha)
    e = m0 * c * c * inv_sqrt1p_minus_one(alpha * alpha / (D * D))
    return float(e) if n.ndim == 0 else e


def _hydrogen_delta(n, j, c, m0):
    alpha = 1.0 / c
    a2 = alpha * alpha
    D, offset = _dirac_D(n, j, alpha)
    x = a2 / (D * D)
    s = np.sqrt(1.0 + x)
    # (1+x)^(-1/2) - 1 + x/2 = x^2 (s + 2) / (2 s (1 + s)^2)
    g = x * x * (s + 2.0) / (2.0 * s * (1.0 + s) ** 2)
    # (alpha^2 / 2) (1/n^2 - 1/D^2) with D - n = offset
    h = 0.5 * a2 * offset * (D + n) / (n * n * D * D)
    return m0 * c * c * (g + h)


def hydrogen_levels(model: HydrogenModel, n) -> LevelEnergies:
    n_arr = np.asarray(n)
    if np.any(n_arr < model.min_n()):
        raise DomainError(f"n must be >= l + 1 = {model.min_n()}")
    return hydrogen_levels_j(n_arr, model.j, model.c, model.m0)


def hydrogen_levels_j(n, j: float, c: float = C_AU, m0: float = 1.0) -> LevelEnergies:
    """Levels from the (n, j) energy formula alone, without an ``l`` constraint."""
    n_arr = np.asarray(n)
    nf = n_arr.astype(float)
    if np.any(nf < j + 0.5) or np.any(nf != np.round(nf)):
        raise DomainError("require integer n >= j + 1/2")
    # m0 c^2 alpha^2 = m0 in atomic units
    e_nr = -(ExtendedReal.of(m0) / ExtendedReal.of(2.0 * nf * nf))
    delta = _hydrogen_delta(nf, j, c, m0)
    if n_arr.ndim == 0:
        delta = float(delta)
    return LevelEnergies(n_arr, e_nr, ExtendedReal.of(delta))


def hydrogen_delta_series(n, j: float, c: float = C_AU, m0: float = 1.0):
    """Leading alpha^4 fine-structure correction -(m0 c^2 alpha^4 / 2 n^4)(n/(j+1/2) - 3/4)."""
    n = np.asarray(n, dtype=float)
    alpha = 1.0 / c
    val = -(m0 * c * c * alpha ** 4 / (2.0 * n ** 4)) * (n / (j + 0.5) - 0.75)
    return float(val) if n.ndim == 0 else val


# ---------------------------------------------------------------------------
# timescales
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Timescales:
    T_cl: float
    T_rev: float
    T_sup: float
    T_critical: float
    theory: Theory


def _analytic_derivatives(model, n: float, theory: Theory):
    theory = Theory(theory)
    if isinstance(model, RotorModel):
        k = HBAR ** 2 / (model.m0 * model.R ** 2)
        if theory is Theory.NR:
            return k * n, k, 0.0
        b = model.x(1.0)
        mc2 = model.m0 * model.c ** 2
        g = math.sqrt(1.0 + b * n * n)
        return mc2 * b * n / g, mc2 * b / g ** 3, -3.0 * mc2 * b * b * n / g ** 5
    if isinstance(model, HydrogenModel):
        scale = model.m0  # m0 c^2 alpha^2
        if theory is Theory.NR:
            return scale / n ** 3, -3.0 * scale / n ** 4, 12.0 * scale / n ** 5
        a = model.alpha ** 2
        D = float(_dirac_D(n, model.j, model.alpha)[0])
        q = D * D + a
        # E = m0 c^2 D / sqrt(D^2 + a) - m0 c^2
        return (
            scale * q ** -1.5,
            -3.0 * scale * D * q ** -2.5,
            3.0 * scale * (4.0 * D * D - a) * q ** -3.5,
        )
    raise TypeError(f"unsupported model {model!r}")


def _energy_dd(model, n, theory):
    if isinstance(model, HydrogenModel):
        lev = hydrogen_levels_j(n, model.j, model.c, model.m0)
    else:
        lev = model.levels(n)
    return lev.energy(theory)


def _fd_derivatives(model, n: int, theory: Theory):
    # five-point central stencils with unit step on integer n
    f = {k: _energy_dd(model, np.array(n + k), theory) for k in (-2, -1, 0, 1, 2)}
    d1 = (f[-2] - f[2] + 8.0 * (f[1] - f[-1])).to_float() / 12.0
    d2 = (16.0 * (f[1] + f[-1]) - (f[2] + f[-2]) - 30.0 * f[0]).to_float() / 12.0
    d3 = ((f[2] - f[-2]) - 2.0 * (f[1] - f[-1])).to_float() / 2.0
    return float(d1), float(d2), float(d3)


def energy_derivatives(model, n, theory: Theory, method: str = "analytic"):
    """First three derivatives dE/dn, d2E/dn2, d3E/dn3 at ``n``."""
    if method == "analytic":
        return _analytic_derivatives(model, float(n), theory)
    if method == "fd":
        return _fd_derivatives(model, int(n), theory)
    raise ValueError(f"unknown method {method!r}")


def _period(factor, d):
    return math.inf if d == 0 else factor * math.pi * HBAR / abs(d)


def critical_time(delta_nbar) -> float:
    """hbar / |delta|; infinite when delta vanishes."""
    d = float(delta_nbar)
    return math.inf if d == 0 else HBAR / abs(d)


def timescales(model, nbar, theory: Theory, method: str = "analytic") -> Timescales:
    """Classical period, revival and super-revival times at ``nbar``.

    T_cl = 2 pi / |E'|, T_rev = 4 pi / |E''|, T_sup = 12 pi / |E'''| (hbar = 1).
    A vanishing derivative yields an infinite timescale.
    """
    if isinstance(model, HydrogenModel) and nbar < model.min_n():
        raise DomainError(f"nbar must be >= {model.min_n()}")
    d1, d2, d3 = (float(d) for d in energy_derivatives(model, nbar, theory, method))
    delta = model.levels(np.array(int(round(nbar)))).delta_value
    return Timescales(
        T_cl=_period(2.0, d1),
        T_rev=_period(4.0, d2),
        T_sup=_period(12.0, d3),
        T_critical=critical_time(delta),
        theory=Theory(theory),
    )
