"""Dual quaternions and their complexification.

A :class:`DualQuaternion` holds eight coefficients in the fixed order
``(1, i, j, k, e, e*i, e*j, e*k)`` where ``e`` is the dual unit (``e**2 == 0``).
Coefficients may be exact (``int``/``Fraction``), float, or complex
(:class:`~hexlink.scalars.GaussianRational` / ``complex``).  The complex unit
commutes with everything and is unrelated to the quaternion unit ``i``; a
dual quaternion with complex coefficients is what the rest of the package calls
a complex dual quaternion.

Lines in space are the dual quaternions ``h`` with ``h*h == -1``; their primal
vector part is the unit direction and their dual vector part is the moment
``point x direction``.
"""
from __future__ import annotations

from fractions import Fraction

from . import scalars
from .scalars import FLOAT_TOL, is_exact, magnitude


def _qmul(a0, a1, a2, a3, b0, b1, b2, b3):
    return (a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)


class DualNumber:
    """``primal + dual*e`` with ``e**2 == 0``."""

    __slots__ = ("primal", "dual")

    def __init__(self, primal=0, dual=0):
        self.primal = primal
        self.dual = dual

    def __add__(self, other):
        if not isinstance(other, DualNumber):
            other = DualNumber(other)
        return DualNumber(self.primal + other.primal, self.dual + other.dual)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, DualNumber):
            other = DualNumber(other)
        return DualNumber(self.primal - other.primal, self.dual - other.dual)

    def __neg__(self):
        return DualNumber(-self.primal, -self.dual)

    def __mul__(self, other):
        if not isinstance(other, DualNumber):
            return DualNumber(self.primal * other, self.dual * other)
        return DualNumber(self.primal * other.primal,
                          self.primal * other.dual + self.dual * other.primal)

    __rmul__ = __mul__

    def inverse(self):
        if self.primal == 0:
            raise ZeroDivisionError("dual number with zero primal part is not invertible")
        inv = 1 / self.primal if not is_exact(self.primal) else Fraction(1) / self.primal
        return DualNumber(inv, -self.dual * inv * inv)

    def __eq__(self, other):
        if not isinstance(other, DualNumber):
            other = DualNumber(other)
        return self.primal == other.primal and self.dual == other.dual

    def __hash__(self):
        return hash((self.primal, self.dual))

    def __iter__(self):
        yield self.primal
        yield self.dual

    def __repr__(self):
        return f"DualNumber({self.primal!r}, {self.dual!r})"


class DualQuaternion:
    """Immutable element of the dual quaternion algebra (possibly complexified)."""

    __slots__ = ("coeffs",)

    def __init__(self, *coeffs):
        if len(coeffs) == 1:
            coeffs = tuple(coeffs[0])
        if len(coeffs) != 8:
            raise ValueError(f"a dual quaternion has 8 coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("DualQuaternion is immutable")

    @classmethod
    def from_parts(cls, primal, dual):
        """Build from two quaternion 4-tuples ``(w, x, y, z)``."""
        return cls(tuple(primal) + tuple(dual))

    @classmethod
    def scalar(cls, value, dual=0):
        z = value * 0
        return cls(value, z, z, z, dual, z, z, z)

    # -- accessors ---------------------------------------------------------
    @property
    def primal(self):
        return self.coeffs[:4]

    @property
    def dual(self):
        return self.coeffs[4:]

    @property
    def primal_vector(self):
        return self.coeffs[1:4]

    @property
    def dual_vector(self):
        return self.coeffs[5:8]

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return 8

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DualQuaternion):
            other = DualQuaternion.scalar(other)
        return DualQuaternion(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, DualQuaternion):
            other = DualQuaternion.scalar(other)
        return DualQuaternion(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return DualQuaternion.scalar(other) - self

    def __neg__(self):
        return DualQuaternion(tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, DualQuaternion):
            return mul(self, other)
        if isinstance(other, DualNumber):
            return self * other.primal + (self * other.dual).times_eps()
        return DualQuaternion(tuple(a * other for a in self.coeffs))

    def __rmul__(self, other):
        if isinstance(other, DualNumber):
            return other.primal * self + (other.dual * self).times_eps()
        return DualQuaternion(tuple(other * a for a in self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, DualNumber):
            return self * other.inverse()
        if is_exact(other) and all(is_exact(a) for a in self.coeffs):
            other = Fraction(other) if not isinstance(other, scalars.GaussianRational) else other
        return DualQuaternion(tuple(a / other for a in self.coeffs))

    def times_eps(self):
        """Left (equivalently right) multiplication by the dual unit."""
        z = self.coeffs[0] * 0
        return DualQuaternion((z, z, z, z) + self.coeffs[:4])

    def conj(self):
        """Quaternion conjugate: negate the six vector coefficients."""
        c = self.coeffs
        return DualQuaternion(c[0], -c[1], -c[2], -c[3], c[4], -c[5], -c[6], -c[7])

    def cconj(self):
        """Complex conjugation of all coefficients (a ring automorphism)."""
        return DualQuaternion(tuple(scalars.cconj(a) for a in self.coeffs))

    def norm(self):
        return norm(self)

    def trace(self):
        return trace(self)

    def inverse(self):
        n = norm(self)
        if scalars.is_zero(n.primal):
            raise ZeroDivisionError("dual quaternion with zero primal norm is not invertible")
        return self.conj() * n.inverse()

    # -- predicates --------------------------------------------------------
    @property
    def is_complex(self):
        return any(isinstance(a, (complex, scalars.GaussianRational)) for a in self.coeffs)

    @property
    def is_exact(self):
        return all(is_exact(a) for a in self.coeffs)

    def is_zero(self, tol=FLOAT_TOL):
        return all(scalars.is_zero(a, 1.0, tol) for a in self.coeffs)

    def max_abs(self):
        return max(magnitude(a) for a in self.coeffs)

    def isclose(self, other, tol=FLOAT_TOL):
        """Coefficientwise equality, exact when both sides are exact."""
        if self.is_exact and other.is_exact:
            return self == other
        scale = max(self.max_abs(), other.max_abs(), 1.0)
        return all(magnitude(a - b) <= tol * scale for a, b in zip(self.coeffs, other.coeffs))

    def __eq__(self, other):
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_float(self):
        return DualQuaternion(tuple(scalars.to_float(a) for a in self.coeffs))

    def complexify(self):
        return DualQuaternion(tuple(scalars.complexify(a) for a in self.coeffs))

    def __repr__(self):
        return "DualQuaternion(" + ", ".join(str(a) for a in self.coeffs) + ")"


def mul(a: DualQuaternion, b: DualQuaternion) -> DualQuaternion:
    """Product in the dual quaternion algebra."""
    p, d = a.coeffs[:4], a.coeffs[4:]
    q, e = b.coeffs[:4], b.coeffs[4:]
    pq = _qmul(*p, *q)
    pe = _qmul(*p, *e)
    dq = _qmul(*d, *q)
    return DualQuaternion(pq + tuple(x + y for x, y in zip(pe, dq)))


def conj(a: DualQuaternion) -> DualQuaternion:
    return a.conj()


def _scalar_part(x: DualQuaternion, what: str) -> DualNumber:
    c = x.coeffs
    vec = (c[1], c[2], c[3], c[5], c[6], c[7])
    if x.is_exact:
        ok = all(v == 0 for v in vec)
    else:
        scale = max(magnitude(c[0]), magnitude(c[4]), 1.0)
        ok = all(magnitude(v) <= 1e-9 * scale for v in vec)
    if not ok:
        raise ArithmeticError(f"{what} has a nonzero vector part: {x!r}")
    return DualNumber(c[0], c[4])


def norm(a: DualQuaternion) -> DualNumber:
    """``a * conj(a)`` as a dual number."""
    return _scalar_part(mul(a, a.conj()), "norm")


def trace(a: DualQuaternion) -> DualNumber:
    """``a + conj(a)`` as a dual number."""
    return _scalar_part(a + a.conj(), "trace")


def _basis(k):
    c = [0] * 8
    c[k] = 1
    return DualQuaternion(c)


ONE = _basis(0)
#: Quaternion units (not the complex unit).
I = _basis(1)
J = _basis(2)
K = _basis(3)
#: Dual unit.
EPS = _basis(4)


def is_line(a: DualQuaternion, tol=FLOAT_TOL) -> bool:
    """True iff ``a*a == -1`` (exactly, or within ``tol`` for floats)."""
    if a.is_complex:
        return False
    sq = mul(a, a)
    target = DualQuaternion.scalar(-1)
    if a.is_exact:
        return sq == target
    return sq.isclose(target, tol)


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


class Line(DualQuaternion):
    """A directed line: a dual quaternion squaring to -1."""

    __slots__ = ()

    def __init__(self, *coeffs, check=True):
        super().__init__(*coeffs)
        if check and not is_line(self):
            raise ValueError(f"not a line (h*h != -1): {self!r}")

    @classmethod
    def of(cls, h: DualQuaternion, check=True) -> "Line":
        return cls(h.coeffs, check=check)

    @property
    def direction(self):
        return self.primal_vector

    @property
    def moment(self):
        return self.dual_vector

    @property
    def point(self):
        """Point of the line closest to the origin (``direction x moment``)."""
        return _cross(self.direction, self.moment)

    def __neg__(self):
        return Line(tuple(-a for a in self.coeffs), check=False)

    def __repr__(self):
        return "Line(" + ", ".join(str(a) for a in self.coeffs) + ")"


def line_from_point_direction(point, direction) -> Line:
    """Line through ``point`` with direction ``direction`` (normalized).

    Exact inputs stay exact when the direction has a rational length; otherwise
    the exact backend rejects the input.
    """
    direction = tuple(direction)
    point = tuple(point)
    if all(x == 0 for x in direction):
        raise ValueError("direction must be nonzero")
    exact_in = all(is_exact(x) for x in direction + point)
    n2 = _dot(direction, direction)
    if exact_in:
        n2 = Fraction(n2)
        length = scalars.sqrt_exact(n2)
        if length is None:
            raise ValueError(f"direction {direction} has irrational length on the exact backend")
        d = tuple(Fraction(x) / length for x in direction)
        p = tuple(Fraction(x) for x in point)
    else:
        length = float(n2) ** 0.5
        d = tuple(float(x) / length for x in direction)
        p = tuple(float(x) for x in point)
    m = _cross(p, d)
    z = d[0] * 0
    return Line((z,) + d + (z,) + m, check=False)


def act(g: DualQuaternion, h: DualQuaternion) -> Line:
    """Conjugation action ``g h g^-1`` of an invertible ``g`` on a line ``h``."""
    n = norm(g)
    if scalars.is_zero(n.primal):
        raise ValueError("g is not invertible")
    res = mul(mul(g, h), g.conj()) * n.inverse()
    return Line(res.coeffs, check=not res.is_complex)
