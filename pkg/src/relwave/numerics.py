"""Cancellation-safe scalar kernels and double-double phase arithmetic.

Phases such as E*t reach 1e13 rad for the long-time rotor runs, so a plain
binary64 product loses every digit below ~1e-3 rad.  Energies and times are
therefore carried as unevaluated sums ``hi + lo`` of two doubles
(:class:`ExtendedReal`) and reduced modulo 2*pi with a double-double
constant.  All kernels are vectorised over numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, RangeError

ArrayLike = Union[float, np.ndarray]

_SPLITTER = 134217729.0  # 2**27 + 1
_PHASE_LIMIT = 1e30

# ---------------------------------------------------------------------------
# error-free transformations
# ---------------------------------------------------------------------------


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``s + e == a + b`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    """Return ``(p, e)`` with ``p = fl(a * b)`` and ``p + e == a * b`` exactly (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


# ---------------------------------------------------------------------------
# double-double value type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedReal:
    """Double-double number ``hi + lo`` with ``|lo| <= ulp(hi)/2``.

    ``hi`` and ``lo`` may be scalars or equally shaped arrays; arithmetic is
    elementwise.
    """

    hi: ArrayLike
    lo: ArrayLike = 0.0

    @classmethod
    def of(cls, x) -> "ExtendedReal":
        if isinstance(x, ExtendedReal):
            return x
        x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
        return cls(x, np.zeros_like(x) if np.ndim(x) else 0.0)

    @classmethod
    def ratio(cls, num, den) -> "ExtendedReal":
        """Correctly rounded-to-dd quotient of two doubles."""
        return cls.of(num) / cls.of(den)

    # -- conversions -------------------------------------------------------
    def __float__(self) -> float:
        return float(self.hi + self.lo)

    def to_float(self) -> ArrayLike:
        return self.hi + self.lo

    def __getitem__(self, idx) -> "ExtendedReal":
        return ExtendedReal(np.asarray(self.hi)[idx], np.asarray(self.lo)[idx])

    @property
    def shape(self):
        return np.shape(self.hi)

    def __len__(self) -> int:
        return len(self.hi)

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "ExtendedReal":
        return ExtendedReal(-self.hi, -self.lo)

    def __add__(self, other) -> "ExtendedReal":
        o = ExtendedReal.of(other)
        s, e = two_sum(self.hi, o.hi)
        t, f = two_sum(self.lo, o.lo)
        e = e + t
        s, e = quick_two_sum(s, e)
        e = e + f
        s, e = quick_two_sum(s, e)
        return ExtendedReal(s, e)

    __radd__ = __add__

    def __sub__(self, other) -> "ExtendedReal":
        return self + (-ExtendedReal.of(other))

    def __rsub__(self, other) -> "ExtendedReal":
        return ExtendedReal.of(other) - self

    def __mul__(self, other) -> "ExtendedReal":
        o = ExtendedReal.of(other)
        p, e = two_prod(self.hi, o.hi)
        e = e + (self.hi * o.lo + self.lo * o.hi)
        p, e = quick_two_sum(p, e)
        return ExtendedReal(p, e)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExtendedReal":
        o = ExtendedReal.of(other)
        q1 = self.hi / o.hi
        r = self - o * q1
        q2 = r.hi / o.hi
        r = r - o * q2
        q3 = r.hi / o.hi
        s, e = quick_two_sum(q1, q2)
        return ExtendedReal(s, e) + q3

    def __rtruediv__(self, other) -> "ExtendedReal":
        return ExtendedReal.of(other) / self


# 2*pi to ~107 bits
TWO_PI = ExtendedReal(6.283185307179586, 2.4492935982947064e-16)


# ---------------------------------------------------------------------------
# cancellation-free square-root kernels
# ---------------------------------------------------------------------------


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > -1.0)):
        raise DomainError("argument must satisfy x > -1")
    return x


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


def sqrt1p_minus_one(x):
    """sqrt(1 + x) - 1, evaluated as x / (1 + sqrt(1 + x))."""
    xa = _check_domain(x)
    return _out(xa / (1.0 + np.sqrt(1.0 + xa)), x)


def sqrt1p_minus_one_minus_half(x):
    """sqrt(1 + x) - 1 - x/2 via the identity -x**2 / (2 (1 + sqrt(1 + x))**2)."""
    xa = _check_domain(x)
    d = 1.0 + np.sqrt(1.0 + xa)
    return _out(-(xa * xa) / (2.0 * d * d), x)


def inv_sqrt1p_minus_one(x):
    """1/sqrt(1 + x) - 1, evaluated as -x / (sqrt(1 + x) (1 + sqrt(1 + x)))."""
    xa = _check_domain(x)
    s = np.sqrt(1.0 + xa)
    return _out(-xa / (s * (1.0 + s)), x)


# ---------------------------------------------------------------------------
# phase reduction
# ---------------------------------------------------------------------------


def reduce_phase(energy, t):
    """Return ``energy * t`` reduced into ``[0, 2*pi)``.

    Both arguments may be floats, arrays or :class:`ExtendedReal`; they
    broadcast.  The product and the reduction are done in double-double, so
    the absolute error stays below 1e-8 rad for ``|energy * t| <= 1e14``.
    Beyond ~5e16 rad the reduction quotient is no longer an exact double and
    accuracy degrades gradually; above 1e30 rad a :class:`RangeError` is raised.
    """
    p = ExtendedReal.of(energy) * ExtendedReal.of(t)
    hi = np.asarray(p.hi, dtype=float)
    if not np.all(np.isfinite(hi)):
        raise RangeError("non-finite phase")
    if np.any(np.abs(hi) > _PHASE_LIMIT):
        raise RangeError("phase magnitude exceeds 1e30 rad")
    k = np.round(hi / TWO_PI.hi)
    kh, kl = two_prod(k, TWO_PI.hi)
    r = p - (ExtendedReal(kh, kl) + k * TWO_PI.lo)
    neg = np.asarray(r.hi) < 0
    if np.any(neg):
        shifted = r + TWO_PI
        r = ExtendedReal(np.where(neg, shifted.hi, r.hi), np.where(neg, shifted.lo, r.lo))
    val = np.asarray(r.hi + r.lo, dtype=float)
    val = np.where((val >= TWO_PI.hi) | (val < 0.0), 0.0, val)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# compensated summation
# ---------------------------------------------------------------------------


def _neumaier(x, axis):
    x = np.moveaxis(np.asarray(x, dtype=float), axis, 0)
    s = np.zeros(x.shape[1:])
    comp = np.zeros(x.shape[1:])
    for v in x:
        t = s + v
        big = np.abs(s) >= np.abs(v)
        comp += np.where(big, (s - t) + v, (v - t) + s)
        s = t
    return s + comp


def compensated_complex_sum(terms, axis: int = -1):
    """Neumaier-compensated sum of complex terms in their given order.

    A plain sequence returns a Python complex; an array is reduced along
    ``axis`` with the other axes vectorised.
    """
    arr = np.asarray(terms, dtype=complex)
    if arr.ndim == 0:
        return complex(arr)
    if arr.size == 0 and arr.ndim == 1:
        return 0j
    out = _neumaier(arr.real, axis) + 1j * _neumaier(arr.imag, axis)
    return complex(out) if np.ndim(out) == 0 else out
