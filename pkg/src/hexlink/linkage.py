"""Closed 6R linkages: validation, Denavit-Hartenberg invariants, chain products.

Joint indices are 1-based and cyclic (``h(7) is h(1)``) throughout this module,
matching the usual labelling of a hexagonal loop.  ``DHParams.c[k-1]`` etc. hold
the invariants of the consecutive axes ``h_k, h_{k+1}``; ``s[k-1]`` is the offset
along ``h_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import scalars
from .dualquat import ONE, DualQuaternion, Line, _cross, _dot, act, is_line, line_from_point_direction, mul
from .scalars import is_exact, magnitude


class LinkageError(ValueError):
    """Raised when a linkage or parameter set violates an invariant."""


class DegenerateConfiguration(ArithmeticError):
    """The full chain product vanishes (a bond-like point, not a closure)."""


def _cyc(seq, k):
    return seq[(k - 1) % 6]


def _parallel(u, v, exact):
    cr = _cross(u, v)
    if exact:
        return all(x == 0 for x in cr)
    return max(abs(x) for x in cr) <= 1e-12


class Linkage6R:
    """Six joint axes ``h_1..h_6`` of a closed 6R loop, in one common frame."""

    __slots__ = ("axes",)

    def __init__(self, axes, validate=True):
        axes = tuple(axes)
        if len(axes) != 6:
            raise LinkageError(f"a 6R linkage needs 6 axes, got {len(axes)}")
        lines = []
        for k, a in enumerate(axes, start=1):
            if validate and not is_line(a):
                raise LinkageError(f"axis {k} is not a line (h*h != -1)")
            lines.append(a if isinstance(a, Line) else Line.of(a, check=False))
        object.__setattr__(self, "axes", tuple(lines))
        if validate:
            self._check_adjacent()

    def __setattr__(self, name, value):
        raise AttributeError("Linkage6R is immutable")

    def _check_adjacent(self):
        for k in range(1, 7):
            a, b = self.h(k), self.h(k + 1)
            if a == b or a == -b:
                raise LinkageError(f"axes {k} and {k % 6 + 1} coincide up to orientation")
            exact = a.is_exact and b.is_exact
            if _parallel(a.direction, b.direction, exact):
                raise LinkageError(f"adjacent axes parallel at joint {k}")

    def h(self, k) -> Line:
        """Axis ``h_k`` with cyclic 1-based index."""
        return self.axes[(k - 1) % 6]

    def __iter__(self):
        return iter(self.axes)

    def __len__(self):
        return 6

    def __eq__(self, other):
        return isinstance(other, Linkage6R) and self.axes == other.axes

    def __hash__(self):
        return hash(self.axes)

    @property
    def is_exact(self):
        return all(a.is_exact for a in self.axes)

    def to_float(self):
        return Linkage6R([Line.of(a.to_float(), check=False) for a in self.axes], validate=False)

    def __repr__(self):
        return f"Linkage6R({list(self.axes)!r})"


@dataclass(frozen=True)
class DHParams:
    """Angle cosines ``c``, Bennett ratios ``b`` and offsets ``s`` of a 6R loop."""

    c: tuple
    b: tuple
    s: tuple

    def __post_init__(self):
        for name in ("c", "b", "s"):
            v = tuple(getattr(self, name))
            if len(v) != 6:
                raise LinkageError(f"DH parameter '{name}' needs 6 entries, got {len(v)}")
            object.__setattr__(self, name, v)

    @classmethod
    def make(cls, c, b, s, exact=True):
        conv = scalars.exact if exact else float
        return cls(tuple(conv(x) for x in c), tuple(conv(x) for x in b), tuple(conv(x) for x in s))

    def validate(self):
        for k, ck in enumerate(self.c, start=1):
            if not -1 < ck < 1:
                raise LinkageError(f"adjacent axes parallel at joint {k} (|c_{k}| >= 1)")
        return self

    @property
    def is_exact(self):
        return all(is_exact(x) for x in self.c + self.b + self.s)

    @property
    def f(self):
        """The products ``b_k c_k``."""
        return tuple(bk * ck for bk, ck in zip(self.b, self.c))

    def sin_phi(self, k):
        """``+sqrt(1 - c_k^2)``; exact only when the root is rational."""
        return scalars.sqrt(1 - _cyc(self.c, k) ** 2)

    @property
    def phi(self):
        return tuple(math.acos(float(ck)) for ck in self.c)

    @property
    def d(self):
        """Unsigned axis distances ``|b_k| sin(phi_k)`` (floats)."""
        return tuple(abs(float(bk)) * math.sqrt(1 - float(ck) ** 2) for bk, ck in zip(self.b, self.c))

    @property
    def d_squared(self):
        """``d_k^2 = b_k^2 (1 - c_k^2)``, exact on rational parameters."""
        return tuple(bk * bk * (1 - ck * ck) for bk, ck in zip(self.b, self.c))

    def flipped(self, k):
        """Parameters after reversing the orientation of axis ``h_k``."""
        c, b, s = list(self.c), list(self.b), list(self.s)
        for idx in ((k - 1) % 6, (k - 2) % 6):
            c[idx] = -c[idx]
            b[idx] = -b[idx]
        s[(k - 1) % 6] = -s[(k - 1) % 6]
        return DHParams(tuple(c), tuple(b), tuple(s))

    def shifted(self, n):
        """Relabel joints cyclically so that joint ``k`` becomes joint ``k - n``."""
        rot = lambda v: tuple(v[(i + n) % 6] for i in range(6))
        return DHParams(rot(self.c), rot(self.b), rot(self.s))

    def to_float(self):
        return DHParams(*(tuple(float(x) for x in v) for v in (self.c, self.b, self.s)))

    def isclose(self, other, tol=1e-9):
        a = self.c + self.b + self.s
        o = other.c + other.b + other.s
        if self.is_exact and other.is_exact:
            return a == o
        return all(abs(float(x) - float(y)) <= tol * max(1.0, abs(float(x))) for x, y in zip(a, o))


@dataclass(frozen=True)
class JointParameter:
    """A point ``(num : den)`` of the projective line; ``(1 : 0)`` is infinity.

    The joint rotation about an axis ``h`` is the dual quaternion ``num - den*h``.
    """

    num: object
    den: object = 1

    def __post_init__(self):
        if self.num == 0 and self.den == 0:
            raise ValueError("(0 : 0) is not a point of the projective line")

    @classmethod
    def of(cls, t):
        if isinstance(t, JointParameter):
            return t
        if t is None:
            return cls(1, 0)
        if isinstance(t, tuple):
            return cls(*t)
        if isinstance(t, float) and math.isinf(t):
            return cls(1, 0)
        return cls(t, 1)

    @classmethod
    def infinity(cls):
        return cls(1, 0)

    @classmethod
    def from_angle(cls, theta):
        """Rotation by ``theta`` about the joint axis (``num = cos(theta/2)``)."""
        return cls(math.cos(theta / 2), math.sin(theta / 2))

    @property
    def value(self):
        if self.den == 0:
            return math.inf
        if isinstance(self.num, int) and isinstance(self.den, int):
            return Fraction(self.num, self.den)
        return self.num / self.den

    def factor(self, h: DualQuaternion) -> DualQuaternion:
        return self.num - h * self.den

    def __eq__(self, other):
        if not isinstance(other, JointParameter):
            other = JointParameter.of(other)
        return self.num * other.den == self.den * other.num

    def __hash__(self):
        v = self.value
        return hash(v)


def _params(t):
    t = list(t)
    if len(t) != 6:
        raise ValueError(f"a configuration has 6 joint parameters, got {len(t)}")
    return [JointParameter.of(x) for x in t]


def chain_product(L: Linkage6R, t, i, j) -> DualQuaternion:
    """``(t_{i+1} - h_{i+1}) ... (t_j - h_j)`` with cyclic indices; empty product is 1."""
    t = _params(t)
    n = (j - i) % 6
    if n == 0 and i != j:
        n = 6
    out = ONE
    for step in range(1, n + 1):
        k = i + step
        out = mul(out, _cyc(t, k).factor(L.h(k)))
    return out


def closure_residual(L: Linkage6R, t):
    """Max-norm of the non-real coordinates of the full product, relative to its real part.

    Zero iff the configuration closes.  Raises :class:`DegenerateConfiguration`
    if the product vanishes identically.
    """
    F = chain_product(L, t, 0, 6)
    if F.is_exact:
        degenerate = F.is_zero()
    else:
        scale = 1.0
        for k, tk in enumerate(_params(t), start=1):
            scale *= magnitude(tk.num) + magnitude(tk.den) * L.h(k).max_abs()
        degenerate = F.max_abs() <= 1e-13 * scale
    if degenerate:
        raise DegenerateConfiguration("degenerate (bond-like) configuration: the chain product vanishes")
    real = magnitude(F.coeffs[0])
    if real == 0:
        return math.inf
    return max(magnitude(x) for x in F.coeffs[1:]) / real


# ---------------------------------------------------------------------------
# Denavit-Hartenberg invariants


def _foot_param(p1, d1, p2, d2, nn):
    """Position along ``d1`` (from ``p1``) of the common-normal foot with line 2."""
    n = _cross(d1, d2)
    diff = tuple(b - a for a, b in zip(p1, p2))
    return _dot(_cross(diff, d2), n) / nn


def dh_from_lines(L: Linkage6R) -> DHParams:
    c, b, s = [], [], []
    exact = L.is_exact
    uu = []
    for k in range(1, 7):
        prod = mul(L.h(k), L.h(k + 1))
        u, v = prod.coeffs[0], prod.coeffs[4]
        one_minus = 1 - u * u
        if scalars.is_zero(one_minus, tol=1e-14):
            raise LinkageError(f"adjacent axes parallel at joint {k}")
        if exact:
            one_minus = Fraction(one_minus)
        c.append(-u)
        b.append(-v / one_minus)
        uu.append(one_minus)
    for k in range(1, 7):
        h = L.h(k)
        p, d = h.point, h.direction
        nxt, prv = L.h(k + 1), L.h(k - 1)
        lam_next = _foot_param(p, d, nxt.point, nxt.direction, _cyc(uu, k))
        lam_prev = _foot_param(p, d, prv.point, prv.direction, _cyc(uu, k - 1))
        s.append(lam_next - lam_prev)
    return DHParams(tuple(c), tuple(b), tuple(s))


def _rotation(angle, exact):
    """``(cos, sin)`` from radians or from an explicit pair."""
    if isinstance(angle, tuple):
        cs, sn = angle
        if exact and not (is_exact(cs) and is_exact(sn)):
            raise LinkageError("exact synthesis needs rational (cos, sin) joint rotations")
        return cs, sn
    if exact and angle == 0:
        return Fraction(1), Fraction(0)
    return math.cos(angle), math.sin(angle)


def lines_from_dh(P: DHParams, joint_angles=None) -> Linkage6R:
    """Open-chain placement of six axes realising ``c_1..c_5, b_1..b_5, s_2..s_5``.

    ``h_1`` is the z-axis; each step translates along the current common normal
    by ``-b_k sin(phi_k)``, twists by ``phi_k`` about it, slides by ``s_{k+1}``
    along the new axis and turns the next normal by the joint angle of
    ``h_{k+1}``.  ``joint_angles`` gives the angles of joints 2..5, each either
    radians or an exact ``(cos, sin)`` pair (default 0).  The closing invariants
    ``c_6, b_6, s_6, s_1`` are whatever the geometry yields; see
    :func:`closing_discrepancy`.
    """
    P.validate()
    exact = P.is_exact
    if joint_angles is None:
        joint_angles = [0] * 4
    joint_angles = list(joint_angles)
    if len(joint_angles) != 4:
        raise LinkageError("joint_angles gives the angles of joints 2..5 (4 entries)")
    if exact:
        for k in range(1, 6):
            if scalars.sqrt_exact(1 - P.c[k - 1] ** 2) is None:
                raise LinkageError(f"sin(phi_{k}) is irrational; use float parameters")
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    x, y, z = (one, zero, zero), (zero, one, zero), (zero, zero, one)
    o = (zero, zero, zero)
    axes = [line_from_point_direction(o, z)]
    add = lambda p, v, t: tuple(pi + t * vi for pi, vi in zip(p, v))
    lin = lambda a, u, b_, v: tuple(a * ui + b_ * vi for ui, vi in zip(u, v))
    for k in range(1, 6):
        ck = P.c[k - 1]
        sk = P.sin_phi(k)
        o = add(o, x, -P.b[k - 1] * sk)
        y, z = lin(ck, y, sk, z), lin(-sk, y, ck, z)
        o = add(o, z, P.s[k % 6])
        axes.append(line_from_point_direction(o, z))
        if k < 5:
            cs, sn = _rotation(joint_angles[k - 1], exact)
            x, y = lin(cs, x, sn, y), lin(-sn, x, cs, y)
    return Linkage6R(axes, validate=False)


def closing_discrepancy(P: DHParams, L: Linkage6R) -> dict:
    """Differences between the closing invariants of ``L`` and the targets in ``P``.

    Keys ``c6, b6, s6, s1``; all zero iff ``dh_from_lines(L) == P``.
    """
    try:
        Q = dh_from_lines(L)
    except LinkageError:
        return {key: math.inf for key in ("c6", "b6", "s6", "s1")}
    return {"c6": Q.c[5] - P.c[5], "b6": Q.b[5] - P.b[5], "s6": Q.s[5] - P.s[5], "s1": Q.s[0] - P.s[0]}


def flip_axis(L: Linkage6R, k) -> Linkage6R:
    """Reverse the orientation of axis ``h_k``."""
    axes = list(L.axes)
    axes[(k - 1) % 6] = -axes[(k - 1) % 6]
    return Linkage6R(axes, validate=False)


# ---------------------------------------------------------------------------
# Coupling spaces


def _rank_exact(rows):
    """Rank of a rational matrix via fraction-free (Bareiss) elimination."""
    mat = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        mat.append([int(x * den) for x in r])
    nrows, ncols = len(mat), len(mat[0]) if mat else 0
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(rank + 1, nrows):
            for cc in range(col + 1, ncols):
                mat[r][cc] = (mat[r][cc] * mat[rank][col] - mat[r][col] * mat[rank][cc]) // prev
            mat[r][col] = 0
        prev = mat[rank][col]
        rank += 1
    return rank


def _rank_float(rows, rel=1e-8):
    sv = np.linalg.svd(np.array(rows, dtype=float), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rel * sv[0]))


def matrix_rank(rows, rel=1e-8):
    """Exact rank on rational entries, thresholded SVD rank on floats."""
    flat = [x for r in rows for x in r]
    if all(is_exact(x) for x in flat):
        return _rank_exact(rows)
    return _rank_float(rows, rel)


def coupling_space(lines):
    """Coefficient vectors spanning the coupling space of consecutive axes."""
    lines = list(lines)
    prods = []
    n = len(lines)
    for mask in range(1 << n):
        g = ONE
        for idx in range(n):
            if mask >> idx & 1:
                g = mul(g, lines[idx])
        prods.append(g.coeffs)
    return prods


def coupling_dimension(L: Linkage6R, i) -> int:
    """Dimension of the span of all ordered subproducts of ``h_i, h_{i+1}, h_{i+2}``."""
    return matrix_rank(coupling_space([L.h(i), L.h(i + 1), L.h(i + 2)]))


def coupling_dimensions(L: Linkage6R):
    return tuple(coupling_dimension(L, k) for k in range(1, 7))


def coupling_dimension_from_dh(P: DHParams, i, tol=1e-9) -> int:
    """Triple coupling dimension read off the invariants of ``h_i, h_{i+1}, h_{i+2}``.

    4 iff ``b_i = b_{i+1} = s_{i+1} = 0``; 6 iff ``b_i^2 = b_{i+1}^2 != 0`` and
    ``s_{i+1} = 0``; otherwise 8.  Valid when no adjacent axes are parallel.
    """
    bi, bj, sj = _cyc(P.b, i), _cyc(P.b, i + 1), _cyc(P.s, i + 1)
    scale = max(1.0, magnitude(bi) ** 2, magnitude(bj) ** 2)
    zero = lambda v, sc=1.0: scalars.is_zero(v, sc, tol)
    if zero(sj, max(1.0, magnitude(bi), magnitude(bj))):
        if zero(bi) and zero(bj):
            return 4
        if zero(bi * bi - bj * bj, scale):
            return 6
    return 8


# ---------------------------------------------------------------------------
# Motion of the axes


def move(L: Linkage6R, t) -> Linkage6R:
    """Axes of ``L`` in configuration ``t``, with link ``o_6`` as the fixed base.

    ``h_i' = F h_i F^-1`` with ``F = (t_1 - h_1) ... (t_{i-1} - h_{i-1})``.  For
    ``t`` on the configuration curve the result has the same DH invariants.
    """
    t = _params(t)
    axes = [L.h(1)]
    F = _cyc(t, 1).factor(L.h(1))
    for k in range(2, 7):
        axes.append(act(F, L.h(k)))
        F = mul(F, _cyc(t, k).factor(L.h(k)))
    return Linkage6R(axes, validate=False)
