"""Quad polynomials of four consecutive axes, and the bond conditions built on them.

Two independent routes are implemented:

* :func:`quad_poly_elim` eliminates ``t2, t3`` from
  ``(i - h1)(t2 - h2)(t3 - h3)(i - h4) = 0`` and reads off the dual coordinate
  ``x`` of the solutions on the line spanned by ``g = (i - h1)(i + h4)`` and
  ``e*g``.  The two solutions are never split: all arithmetic happens in the
  two-dimensional algebra ``K[t]/(R(t))`` where ``R`` is the eliminant, so the
  result stays exact over the Gaussian rationals.
* :func:`invariant_quads` evaluates the closed form in the DH invariants.

Here ``i`` is the complex unit, not the quaternion unit.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalars
from .dualquat import ONE, DualQuaternion, is_line, mul
from .dualquat import _cross
from .linkage import (DHParams, Linkage6R, LinkageError, coupling_dimension, coupling_space,
                      dh_from_lines, matrix_rank)
from .scalars import GaussianRational, is_exact, magnitude, make_complex

MAX_RETRIES = 5
FLOAT_RTOL = 1e-9


class EliminationError(ArithmeticError):
    """The elimination does not produce a zero-dimensional degree-2 intersection."""


def _cone(exact):
    return GaussianRational(1, 0) if exact else 1 + 0j


@dataclass(frozen=True)
class QuadPolynomial:
    """Monic quadratic ``x**2 + a1*x + a0`` with complex coefficients."""

    a1: object
    a0: object

    @property
    def coeffs(self):
        """``(1, a1, a0)``, highest degree first."""
        return (1, self.a1, self.a0)

    @property
    def root_mean(self):
        return -self.a1 / 2

    @property
    def discriminant(self):
        return self.a1 * self.a1 - 4 * self.a0

    @property
    def is_exact(self):
        return is_exact(self.a1) and is_exact(self.a0)

    def __call__(self, x):
        return x * x + self.a1 * x + self.a0

    def shift(self, w):
        """The polynomial ``x -> self(x + w)``."""
        return QuadPolynomial(self.a1 + 2 * w, w * w + self.a1 * w + self.a0)

    def conjugate(self):
        return QuadPolynomial(scalars.cconj(self.a1), scalars.cconj(self.a0))

    def resultant(self, other: "QuadPolynomial"):
        """Resultant of two monic quadratics (product of ``other`` over our roots)."""
        p, q, r, s = self.a1, self.a0, other.a1, other.a0
        return (r - p) * (r - p) * q - (r - p) * (s - q) * p + (s - q) * (s - q)

    def max_deviation(self, other: "QuadPolynomial") -> float:
        return max(magnitude(self.a1 - other.a1), magnitude(self.a0 - other.a0))

    def scale(self) -> float:
        return max(1.0, magnitude(self.a1) ** 2, magnitude(self.a0))

    def isclose(self, other: "QuadPolynomial", tol=FLOAT_RTOL) -> bool:
        if self.is_exact and other.is_exact:
            return self.a1 == other.a1 and self.a0 == other.a0
        s = max(self.scale(), other.scale())
        return (magnitude(self.a1 - other.a1) <= tol * s ** 0.5
                and magnitude(self.a0 - other.a0) <= tol * s)

    def to_float(self):
        return QuadPolynomial(complex(self.a1), complex(self.a0))

    def __str__(self):
        return f"x^2 + ({self.a1})*x + ({self.a0})"


# ---------------------------------------------------------------------------
# Arithmetic in K[t]/(t^2 + r1 t + r0); elements are pairs (p, q) = p + q t


class _Ext:
    def __init__(self, r1, r0, exact, scale):
        self.r1, self.r0, self.exact, self.scale = r1, r0, exact, scale

    def mul(self, a, b):
        p1, q1 = a
        p2, q2 = b
        qq = q1 * q2
        return (p1 * p2 - qq * self.r0, p1 * q2 + q1 * p2 - qq * self.r1)

    @staticmethod
    def add(a, b):
        return (a[0] + b[0], a[1] + b[1])

    @staticmethod
    def smul(k, a):
        return (k * a[0], k * a[1])

    def trace(self, a):
        return 2 * a[0] - a[1] * self.r1

    def norm(self, a):
        p, q = a
        return p * (p - q * self.r1) + q * q * self.r0

    def inverse(self, a):
        p, q = a
        n = self.norm(a)
        return ((p - q * self.r1) / n, -q / n)

    def is_zero(self, a, scale=None):
        if self.exact:
            return a[0] == 0 and a[1] == 0
        s = self.scale if scale is None else scale
        return magnitude(a[0]) <= FLOAT_RTOL * s and magnitude(a[1]) <= FLOAT_RTOL * s

    def zero_norm(self, a, scale=None):
        n = self.norm(a)
        if self.exact:
            return n == 0
        s = self.scale if scale is None else scale
        return magnitude(n) <= FLOAT_RTOL * s * s


def _complex_coords(re: DualQuaternion, im: DualQuaternion):
    return tuple(make_complex(a, b) for a, b in zip(re.coeffs, im.coeffs))


def _sandwich(h1, X, h4):
    """Coordinates of ``(i - h1) X (i - h4) = (-X + h1 X h4) + i(-(h1 X + X h4))``."""
    re = mul(mul(h1, X), h4) - X
    im = -(mul(h1, X) + mul(X, h4))
    return _complex_coords(re, im)


def _left(h1, Y):
    """Coordinates of ``(i - h1) Y = -h1 Y + i Y``."""
    return _complex_coords(-mul(h1, Y), Y)


def _check_inputs(h1, h2, h3, h4):
    for n, h in enumerate((h1, h2, h3, h4), start=1):
        if not is_line(h):
            raise LinkageError(f"argument h{n} is not a line")
    exact = all(h.is_exact for h in (h1, h2, h3, h4))

    def par(a, b):
        cr = _cross(a.primal_vector, b.primal_vector)
        if exact:
            return all(x == 0 for x in cr)
        return max(abs(x) for x in cr) <= 1e-12

    for (a, b, na, nb) in ((h1, h2, 1, 2), (h3, h4, 3, 4), (h1, h4, 1, 4)):
        if par(a, b):
            raise LinkageError(f"h{na} and h{nb} are parallel")
    if matrix_rank(coupling_space([h1, h2, h3])) != 8:
        raise LinkageError("coupling dimension of (h1, h2, h3) is not 8")
    return exact


def _rand_vec(rng, exact, n=8):
    vals = [(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(n)]
    return [make_complex(Fraction(a), Fraction(b)) if exact else complex(a, b) for a, b in vals]


def _dotc(lam, vec):
    acc = lam[0] * vec[0]
    for a, b in zip(lam[1:], vec[1:]):
        acc = acc + a * b
    return acc


def quad_poly_elim(h1, h2, h3, h4, seed=0) -> QuadPolynomial:
    """Monic quadratic in the dual coordinate ``x`` of ``G`` meeting the coupling variety.

    ``G`` is spanned by ``g = (i - h1)(i + h4)`` and ``e*g``; the roots are the
    ``x`` with ``y (1 + x e) g = (i - h1)(t2 - h2)(t3 - h3)`` for a solution
    ``(t2, t3)`` of ``(i - h1)(t2 - h2)(t3 - h3)(i - h4) = 0``.  ``seed`` fixes
    the random linear combinations used for the eliminant.
    """
    exact = _check_inputs(h1, h2, h3, h4)
    h23 = mul(h2, h3)
    alpha = _sandwich(h1, ONE, h4)
    beta = tuple(-v for v in _sandwich(h1, h3, h4))
    gamma = tuple(-v for v in _sandwich(h1, h2, h4))
    delta = _sandwich(h1, h23, h4)
    m_basis = (_left(h1, ONE), tuple(-v for v in _left(h1, h3)),
               tuple(-v for v in _left(h1, h2)), _left(h1, h23))
    g = _complex_coords(-ONE - mul(h1, h4), h4 - h1)
    scale = max(1.0, *(magnitude(v) for v in alpha + beta + gamma + delta))

    rng = random.Random(seed)
    last = None
    for _ in range(MAX_RETRIES):
        lam, mu = _rand_vec(rng, exact), _rand_vec(rng, exact)
        F = [_dotc(lam, v) for v in (alpha, beta, gamma, delta)]
        G = [_dotc(mu, v) for v in (alpha, beta, gamma, delta)]
        Ruu = F[0] * G[1] - F[1] * G[0]
        Ruv = F[0] * G[3] + F[2] * G[1] - F[1] * G[2] - F[3] * G[0]
        Rvv = F[2] * G[3] - F[3] * G[2]
        rscale = max(magnitude(Ruu), magnitude(Ruv), magnitude(Rvv))
        if rscale == 0 or (not exact and rscale <= 1e-12 * scale * scale):
            last = "eliminant vanishes identically"
            continue
        try:
            return _solve(exact, rng, (Ruu, Ruv, Rvv), rscale, (alpha, beta, gamma, delta),
                          (F, G, lam, mu), m_basis, g, scale)
        except _Retry as exc:
            last = str(exc)
    raise EliminationError(f"intersection not zero-dimensional ({last})")


class _Retry(Exception):
    pass


def _chart(exact, rng, R, rscale):
    """A Moebius chart ``(u2, v2) = (a t + b, c t + d)`` where the eliminant keeps degree 2."""
    Ruu, Ruv, Rvv = R
    cands = [(1, 0, 0, 1), (0, 1, 1, 0)]
    cands += [(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
              for _ in range(20)]
    for a, b, c, d in cands:
        if a * d - b * c == 0:
            continue
        lead = Ruu * a * a + Ruv * a * c + Rvv * c * c
        if exact and lead == 0:
            continue
        if not exact and magnitude(lead) <= 1e-6 * rscale:
            continue
        mid = 2 * Ruu * a * b + Ruv * (a * d + b * c) + 2 * Rvv * c * d
        const = Ruu * b * b + Ruv * b * d + Rvv * d * d
        return (a, b, c, d), mid / lead, const / lead
    raise _Retry("no admissible chart")


def _solve(exact, rng, R, rscale, coords, combos, m_basis, g, scale):
    (a, b, c, d), r1, r0 = _chart(exact, rng, R, rscale)
    A = _Ext(r1, r0, exact, scale * max(1.0, magnitude(r1), magnitude(r0)) ** 2)
    one = _cone(exact)
    u2 = (one * b, one * a)
    v2 = (one * d, one * c)
    alpha, beta, gamma, delta = coords
    F, G, lam, mu = combos

    def row(fa, fb, fc, fd):
        return (A.add(A.smul(fa, u2), A.smul(fc, v2)), A.add(A.smul(fb, u2), A.smul(fd, v2)))

    candidates = [row(*F), row(*G)]
    for _ in range(3):
        nu = _rand_vec(rng, exact)
        candidates.append(row(*[_dotc(nu, v) for v in coords]))
    for r in candidates:
        u3, v3 = r[1], (-r[0][0], -r[0][1])
        if not (A.zero_norm(u3) and A.zero_norm(v3)):
            break
        det = u3[0] * v3[1] - u3[1] * v3[0]
        if (det != 0) if exact else magnitude(det) > FLOAT_RTOL * A.scale:
            break
    else:
        raise _Retry("no finite (t2, t3) on some solution")

    uu, uv = A.mul(u2, u3), A.mul(u2, v3)
    vu, vv = A.mul(v2, u3), A.mul(v2, v3)
    basis = (uu, uv, vu, vv)

    def combine(vecs, m):
        acc = A.smul(vecs[0][m], basis[0])
        for k in range(1, 4):
            acc = A.add(acc, A.smul(vecs[k][m], basis[k]))
        return acc

    pscale = max(magnitude(x) for e in basis for x in e) * scale
    for m in range(8):
        if not A.is_zero(combine(coords, m), pscale):
            raise _Retry("spurious eliminant root (back-substitution failed)")

    M = [combine(m_basis, m) for m in range(8)]
    j = max(range(4), key=lambda k: magnitude(g[k]))
    ginv = 1 / g[j]
    y = A.smul(ginv, M[j])
    mscale = max(magnitude(x) for e in M for x in e)
    for m in range(4):
        if not A.is_zero(A.add(M[m], A.smul(-g[m], y)), mscale):
            raise EliminationError("solution does not lie on the line G")
    z = A.smul(ginv, A.add(M[4 + j], A.smul(-g[4 + j], y)))
    for m in range(4):
        resid = A.add(A.add(M[4 + m], A.smul(-g[4 + m], y)), A.smul(-g[m], z))
        if not A.is_zero(resid, mscale):
            raise EliminationError("solution does not lie on the line G")
    if A.zero_norm(y, mscale):
        raise EliminationError("a solution is a pure dual element; the quad polynomial degree drops")
    x = A.mul(z, A.inverse(y))
    return QuadPolynomial(-A.trace(x), A.norm(x))


# ---------------------------------------------------------------------------
# Invariant quad polynomials


@dataclass(frozen=True)
class InvariantQuadSet:
    """``qplus[k-1]`` is ``Q_k^+`` and ``qminus[k-1]`` is ``Q_k^-`` for ``k = 1..6``."""

    qplus: tuple
    qminus: tuple

    def family(self, sign):
        return self.qplus if sign == "+" else self.qminus

    def isclose(self, other, tol=FLOAT_RTOL):
        return all(p.isclose(q, tol) for p, q in zip(self.qplus + self.qminus, other.qplus + other.qminus))

    def max_deviation(self, other):
        return max(p.max_deviation(q) for p, q in zip(self.qplus + self.qminus, other.qplus + other.qminus))


def _printed_formula(c, b, s):
    f = tuple(bk * ck for bk, ck in zip(b, c))
    cc = lambda seq, k: seq[(k - 1) % 6]
    out = []
    for k in range(1, 7):
        shift_re = (cc(f, k) - cc(f, k + 2) - cc(f, k + 3) + cc(f, k + 5)) / 2
        shift_im = (cc(s, k + 3) - cc(s, k)) / 4
        const_re = cc(c, k + 1) / 2 * (cc(b, k) * cc(b, k + 2) - cc(s, k + 1) * cc(s, k + 2))
        const_im = (cc(s, k + 1) * (cc(b, k) - cc(b, k + 2) * cc(c, k + 1))
                    + cc(s, k + 2) * (cc(b, k + 2) - cc(b, k) * cc(c, k + 1))) / 2
        A = make_complex(shift_re, shift_im)
        out.append(QuadPolynomial(2 * A, A * A + make_complex(const_re, const_im)))
    return tuple(out)


def _derived_formula(c, b, s):
    f = tuple(bk * ck for bk, ck in zip(b, c))
    cc = lambda seq, k: seq[(k - 1) % 6]
    out = []
    for k in range(1, 7):
        c1 = cc(c, k + 1)
        b0, b1, b2 = cc(b, k), cc(b, k + 1), cc(b, k + 2)
        s1, s2 = cc(s, k + 1), cc(s, k + 2)
        shift_re = (cc(f, k) - cc(f, k + 2) - cc(f, k + 3) + cc(f, k + 5)) / 4
        shift_im = (cc(s, k) - cc(s, k + 3)) / 4
        d1_sq = b1 * b1 * (1 - c1 * c1)
        const_re = ((d1_sq - b0 * b0 - b2 * b2 + s1 * s1 + s2 * s2) / 4
                    - c1 / 2 * (b0 * b2 - s1 * s2))
        const_im = (s1 * (b0 + b2 * c1) + s2 * (b2 + b0 * c1)) / 2
        A = make_complex(shift_re, shift_im)
        out.append(QuadPolynomial(2 * A, A * A + make_complex(const_re, const_im)))
    return tuple(out)


def _closed_form(P: DHParams, formula) -> InvariantQuadSet:
    P.validate()
    conv = Fraction if P.is_exact else float
    c = tuple(conv(x) for x in P.c)
    b = tuple(conv(x) for x in P.b)
    s = tuple(conv(x) for x in P.s)
    plus = formula(c, b, s)
    minus = formula(tuple(-x for x in c), tuple(-x for x in b),
                    tuple(x if k % 2 == 0 else -x for k, x in enumerate(s, start=1)))
    return InvariantQuadSet(plus, minus)


def invariant_quads(P: DHParams) -> InvariantQuadSet:
    """Closed-form ``Q_k^+`` and ``Q_k^-`` exactly as published.

    ``Q_k^+ = (x + A_k)**2 + B_k`` with
    ``A_k = (f_k - f_{k+2} - f_{k+3} + f_{k+5})/2 + i(s_{k+3} - s_k)/4`` and
    ``B_k = c_{k+1}/2 (b_k b_{k+2} - s_{k+1} s_{k+2})
    + i/2 (s_{k+1}(b_k - b_{k+2} c_{k+1}) + s_{k+2}(b_{k+2} - b_k c_{k+1}))``.
    ``Q_k^-`` negates every ``b`` and ``c`` and replaces ``s_k`` by ``(-1)**k s_k``.

    This form does not agree with the centered elimination polynomials; see
    :func:`derived_invariant_quads` for the form that does.
    """
    return _closed_form(P, _printed_formula)


def derived_invariant_quads(P: DHParams) -> InvariantQuadSet:
    """Closed form that reproduces the centered elimination polynomials exactly.

    ``Q_k^+ = (x + A_k)**2 + B_k`` with
    ``A_k = (f_k - f_{k+2} - f_{k+3} + f_{k+5})/4 + i(s_k - s_{k+3})/4`` and
    ``B_k = (d_{k+1}**2 - b_k**2 - b_{k+2}**2 + s_{k+1}**2 + s_{k+2}**2)/4
    - c_{k+1}/2 (b_k b_{k+2} - s_{k+1} s_{k+2})
    + i/2 (s_{k+1}(b_k + b_{k+2} c_{k+1}) + s_{k+2}(b_{k+2} + b_k c_{k+1}))``,
    where ``d_{k+1}**2 = b_{k+1}**2 (1 - c_{k+1}**2)``.  The minus family uses
    the same substitution rule as :func:`invariant_quads`.  Equating opposite
    polynomials of this form yields the sum-of-squares equations of the two
    genus-5 families.
    """
    return _closed_form(P, _derived_formula)


def sign_flipped(L: Linkage6R) -> Linkage6R:
    """``(-h1, h2, -h3, h4, -h5, h6)``: the linkage whose plus family is the minus family of ``L``."""
    return Linkage6R([-h if k % 2 == 1 else h for k, h in enumerate(L.axes, start=1)], validate=False)


def elimination_quads(L: Linkage6R, seed=0):
    """Raw ``Q_{h_k, h_{k+1}, h_{k+2}, h_{k+3}}`` for ``k = 1..6``."""
    return tuple(quad_poly_elim(L.h(k), L.h(k + 1), L.h(k + 2), L.h(k + 3), seed=seed) for k in range(1, 7))


def center(raw):
    """Shift each opposite pair so the mean of its four roots is zero; returns (quads, shifts)."""
    out, shifts = [], []
    for k in range(6):
        w = (raw[k].root_mean + raw[(k + 3) % 6].root_mean) / 2
        out.append(raw[k].shift(w))
        shifts.append(w)
    return tuple(out), tuple(shifts)


def invariant_quads_from_lines(L: Linkage6R, seed=0) -> InvariantQuadSet:
    """Invariant quad polynomials by elimination and centering (no DH parameters)."""
    plus, _ = center(elimination_quads(L, seed))
    minus, _ = center(elimination_quads(sign_flipped(L), seed))
    return InvariantQuadSet(plus, minus)


@dataclass
class CrosscheckReport:
    """Centered elimination polynomials against a closed form.

    ``match`` refers to the closed form passed in (the published one by
    default); ``match_derived`` always refers to :func:`derived_invariant_quads`.
    """

    match: bool
    max_deviation: float
    match_derived: bool
    max_deviation_derived: float
    from_formula: InvariantQuadSet
    from_elimination: InvariantQuadSet
    shifts_plus: tuple
    shifts_minus: tuple
    mismatches: list = field(default_factory=list)


def _compare(formula, elim, tol):
    bad = []
    for sign in ("+", "-"):
        for k, (p, q) in enumerate(zip(formula.family(sign), elim.family(sign)), start=1):
            if not p.isclose(q, tol):
                bad.append((sign, k, p.max_deviation(q)))
    return bad


def crosscheck_invariant_vs_elim(L: Linkage6R, seed=0, tol=FLOAT_RTOL, closed_form=None) -> CrosscheckReport:
    """Compare centered elimination polynomials with a closed form on ``dh_from_lines(L)``.

    For each ``k`` the raw polynomials ``Q_{h_k..h_{k+3}}`` and
    ``Q_{h_{k+3}..h_k}`` are shifted by the mean of their four roots; the minus
    family is the same construction on ``(-h1, h2, -h3, h4, -h5, h6)``.
    """
    for k in range(1, 7):
        if coupling_dimension(L, k) != 8:
            raise LinkageError(f"coupling dimension of the triple starting at joint {k} is not 8")
    P = dh_from_lines(L)
    formula = (closed_form or invariant_quads)(P)
    derived = derived_invariant_quads(P)
    plus, wp = center(elimination_quads(L, seed))
    minus, wm = center(elimination_quads(sign_flipped(L), seed))
    elim = InvariantQuadSet(plus, minus)
    mismatches = _compare(formula, elim, tol)
    return CrosscheckReport(not mismatches, formula.max_deviation(elim),
                            not _compare(derived, elim, tol), derived.max_deviation(elim),
                            formula, elim, wp, wm, mismatches)


# ---------------------------------------------------------------------------
# Bond conditions


@dataclass(frozen=True)
class PairCondition:
    k: int
    sign: str
    gcd_degree: int
    resultant: object
    same_discriminant: bool


@dataclass(frozen=True)
class BondConditionReport:
    """gcd degree of ``Q_k^s`` and ``Q_{k+3}^s`` for ``k = 1, 2, 3`` and ``s = +, -``.

    These are necessary conditions and upper bounds on bond counts only.
    """

    pairs: tuple

    def get(self, k, sign) -> PairCondition:
        return next(p for p in self.pairs if p.k == k and p.sign == sign)

    def degrees(self):
        return {(p.k, p.sign): p.gcd_degree for p in self.pairs}


def _vanishes(value, scale, exact, rel):
    if exact:
        return value == 0
    return magnitude(value) <= rel * max(scale, 1.0)


def gcd_degree(p: QuadPolynomial, q: QuadPolynomial, rel=1e-8) -> int:
    """Degree of ``gcd(p, q)`` for monic quadratics."""
    exact = p.is_exact and q.is_exact
    if exact:
        if p == q:
            return 2
    elif p.isclose(q, rel):
        return 2
    scale = max(p.scale(), q.scale()) ** 2
    return 1 if _vanishes(p.resultant(q), scale, exact, rel) else 0


def bond_conditions(P_or_quads, rel=1e-8, closed_form=None) -> BondConditionReport:
    """gcd degrees of opposite invariant quad polynomials.

    Accepts DH parameters or a ready :class:`InvariantQuadSet`.  DH input is
    turned into quads with ``closed_form`` (default :func:`derived_invariant_quads`,
    which agrees with the definition by elimination).
    """
    if isinstance(P_or_quads, InvariantQuadSet):
        quads = P_or_quads
    else:
        quads = (closed_form or derived_invariant_quads)(P_or_quads)
    pairs = []
    for sign in ("+", "-"):
        fam = quads.family(sign)
        for k in (1, 2, 3):
            p, q = fam[k - 1], fam[k + 2]
            exact = p.is_exact and q.is_exact
            res = p.resultant(q)
            disc_same = _vanishes(p.discriminant - q.discriminant, max(p.scale(), q.scale()), exact, rel)
            pairs.append(PairCondition(k, sign, gcd_degree(p, q, rel), res, disc_same))
    return BondConditionReport(tuple(pairs))
