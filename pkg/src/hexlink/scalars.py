"""Scalar backends: exact rationals, Gaussian rationals, and IEEE floats.

Exact quantities are ``int``/``Fraction`` (real) or :class:`GaussianRational`
(complex).  The float backend uses ``float`` and ``complex``.  Helpers in this
module dispatch on the runtime type so the algebra code above it stays generic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

#: Relative tolerance used by the float backend for equality and zero tests.
FLOAT_TOL = 1e-9


class GaussianRational:
    """Element of Q(i), stored as a pair of ``Fraction``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, Rational):
            return cls(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, Rational):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return GaussianRational(self.re / other, self.im / other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}*I"


def is_exact(x) -> bool:
    return isinstance(x, (Rational, GaussianRational))


def exact(x):
    """Convert ``x`` (int, Fraction, decimal or ``p/q`` string) to a ``Fraction``.

    Floats are converted by their decimal repr, so ``exact(0.1) == Fraction(1, 10)``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_float(x):
    if isinstance(x, GaussianRational):
        return complex(x)
    if isinstance(x, complex):
        return x
    return float(x)


def make_complex(re, im):
    """Complex scalar in the backend of ``re``/``im``."""
    if is_exact(re) and is_exact(im):
        return GaussianRational(re, im)
    return complex(float(re), float(im))


def complexify(x):
    """Embed a real scalar into the matching complex backend."""
    if isinstance(x, (GaussianRational, complex)):
        return x
    if isinstance(x, Rational):
        return GaussianRational(x, 0)
    return complex(x)


def cconj(x):
    """Complex conjugate; the identity on real scalars."""
    if isinstance(x, (GaussianRational, complex)):
        return x.conjugate()
    return x


def magnitude(x) -> float:
    return abs(complex(x)) if isinstance(x, GaussianRational) else abs(x)


def is_zero(x, scale=1.0, tol=FLOAT_TOL) -> bool:
    """Zero test: exact for rational backends, ``|x| <= tol * scale`` otherwise."""
    if is_exact(x):
        return x == 0
    return abs(x) <= tol * max(scale, 1.0)


def sqrt_exact(x: Fraction):
    """Rational square root of ``x`` or ``None`` when it is irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt(x):
    """Square root in the backend of ``x``; exact inputs must be perfect squares."""
    if is_exact(x):
        r = sqrt_exact(x)
        if r is None:
            raise ValueError(f"{x} has no rational square root")
        return r
    return math.sqrt(x)
