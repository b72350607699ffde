"""Spinor structure, angular densities and angular moments of the Dirac rotor.

Angles are treated as a plain coordinate on [0, 2*pi), not as a circular
statistic: the moments are the matrix elements of theta and theta**2 on that
interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import ConsistencyError, DomainError
from .numerics import compensated_complex_sum
from .spectra import RotorModel, Theory
from .wavepacket import EvolvedCoefficients

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpinorWeights:
    """Normalisation N_n and lower/upper component ratio k_n per mode.

    ``lower`` holds 1 - 2 pi N_n^2 = k^2 / (1 + k^2) computed without
    cancellation.
    """

    n: np.ndarray
    N: np.ndarray
    k: np.ndarray
    lower: np.ndarray


@dataclass(frozen=True)
class AngularDensity:
    theta: np.ndarray
    values: np.ndarray  # [..., M], probability per radian

    @property
    def step(self) -> float:
        return TWO_PI / self.theta.size

    def integral(self):
        return self.values.sum(axis=-1) * self.step


@dataclass(frozen=True)
class Moments:
    mean: object
    variance: object


def spinor_weights(model: RotorModel, n) -> SpinorWeights:
    n = np.atleast_1d(np.asarray(n))
    e_rel = model.levels(n).E_rel
    mc2 = model.m0 * model.c ** 2
    k = model.c * n.astype(float) / (model.R * (e_rel + 2.0 * mc2))
    k2 = k * k
    N = 1.0 / np.sqrt(TWO_PI * (1.0 + k2))
    return SpinorWeights(n, N, k, k2 / (1.0 + k2))


def omega(weights_r: SpinorWeights, weights_s: SpinorWeights) -> np.ndarray:
    """Coupling 2 pi N_r N_s + sqrt((1 - 2 pi N_r^2)(1 - 2 pi N_s^2)) as an outer table."""
    rad = weights_r.lower[:, None] * weights_s.lower[None, :]
    if np.any(rad < -1e-15):
        raise ConsistencyError("negative radicand in omega")
    return TWO_PI * weights_r.N[:, None] * weights_s.N[None, :] + np.sqrt(np.clip(rad, 0.0, None))


def theta_grid(M: int) -> np.ndarray:
    return TWO_PI * np.arange(M) / M


def density(evolved: EvolvedCoefficients, weights: SpinorWeights | None = None, M: int = 2048) -> AngularDensity:
    """Angular probability density on M uniform points of [0, 2 pi).

    REL: |sum A N e^{in theta}|^2 + |sum A k N e^{in theta}|^2.
    NR:  |sum A e^{in theta}|^2 / (2 pi).
    """
    ns = evolved.ns
    if M < 4 * ns.size:
        raise DomainError("grid too coarse for the number of modes")
    theta = theta_grid(M)
    basis = np.exp(1j * np.outer(ns, theta))
    amps = evolved.amplitudes
    if Theory(evolved.theory) is Theory.REL:
        if weights is None:
            raise DomainError("relativistic density needs spinor weights")
        upper = (amps * weights.N) @ basis
        lower = (amps * weights.N * weights.k) @ basis
        values = np.abs(upper) ** 2 + np.abs(lower) ** 2
    else:
        values = np.abs(amps @ basis) ** 2 / TWO_PI
    return AngularDensity(theta, values)


def _pair_tables(ns):
    d = (ns[None, :] - ns[:, None]).astype(float)
    off = d != 0
    dd = np.where(off, d, 1.0)
    w_mean = np.where(off, 1.0 / (1j * dd), 0.0)
    w_sq = np.where(off, -2.0 * (math.pi * 1j / dd - 1.0 / dd ** 2), 0.0)
    return w_mean, w_sq


def analytic_moments(evolved: EvolvedCoefficients, weights: SpinorWeights | None, theory) -> Moments:
    """Mean and variance of theta from the closed-form double sums over r != s.

    The relativistic sums carry the omega coupling; the non-relativistic ones
    use omega = 1 (its value when N = 1/sqrt(2 pi)).
    """
    theory = Theory(theory)
    amps = np.asarray(evolved.amplitudes)
    single = amps.ndim == 1
    amps = np.atleast_2d(amps)
    ns = evolved.ns
    w_mean, w_sq = _pair_tables(ns)
    if theory is Theory.REL:
        if weights is None:
            raise DomainError("relativistic moments need spinor weights")
        om = omega(weights, weights)
        w_mean, w_sq = w_mean * om, w_sq * om
    pair = np.conj(amps)[:, :, None] * amps[:, None, :]
    m = pair.shape[1]
    s_mean = compensated_complex_sum((pair * w_mean).reshape(-1, m * m), axis=-1)
    s_sq = compensated_complex_sum((pair * w_sq).reshape(-1, m * m), axis=-1)
    mean = math.pi + np.asarray(s_mean)
    second = 4.0 * math.pi ** 2 / 3.0 + np.asarray(s_sq)
    resid = np.maximum(np.abs(mean.imag), np.abs(second.imag))
    if np.any(resid > 1e-8):
        raise ConsistencyError(f"imaginary residue {resid.max():.3g} in angular moments")
    mu = mean.real
    var = second.real - mu ** 2
    if single:
        return Moments(float(mu[0]), float(var[0]))
    return Moments(mu, var)


def quadrature_moments(dens: AngularDensity) -> Moments:
    """Moments of an angular density by quadrature on the closed grid [0, 2 pi].

    The density is periodic but theta * rho is not, so the sample at 2 pi is
    appended and composite Simpson is used (the trapezoid rule would carry an
    O(h^2) endpoint error here).
    """
    vals = np.asarray(dens.values)
    norm = dens.integral()
    if np.any(np.abs(norm - 1.0) > 1e-6):
        raise DomainError("density is not normalised")
    theta = np.append(dens.theta, TWO_PI)
    closed = np.concatenate([vals, vals[..., :1]], axis=-1)
    mean = simpson(theta * closed, x=theta, axis=-1)
    second = simpson(theta ** 2 * closed, x=theta, axis=-1)
    var = second - mean ** 2
    if np.ndim(mean) == 0:
        return Moments(float(mean), float(var))
    return Moments(mean, var)


def angular_momentum_moments(evolved: EvolvedCoefficients):
    """(<n>, <n^2> - <n>^2) from the mode populations; time independent in both theories."""
    p = np.abs(np.asarray(evolved.amplitudes)) ** 2
    ns = evolved.ns.astype(float)
    mean = p @ ns
    return mean, p @ ns ** 2 - mean ** 2
