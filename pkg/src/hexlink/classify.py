"""Family membership, genus bounds, bond diagrams and coupler-curve degrees."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .linkage import DHParams, LinkageError, coupling_dimension_from_dh
from .quadpoly import bond_conditions
from .scalars import is_exact, magnitude

FLOAT_RTOL = 1e-8

FAMILIES = ("hooke", "dietmaier", "family1", "family2", "bricard_orthogonal")


@dataclass(frozen=True)
class Equation:
    """``lhs = rhs`` with its residual; ``degree`` is the length dimension of the terms."""

    name: str
    lhs: object
    rhs: object
    degree: int = 1

    @property
    def residual(self):
        return self.lhs - self.rhs

    def holds(self, length_scale=1.0, rtol=FLOAT_RTOL) -> bool:
        r = self.residual
        if is_exact(r):
            return r == 0
        scale = max(magnitude(self.lhs), magnitude(self.rhs), length_scale ** self.degree)
        return magnitude(r) <= rtol * scale


def _idx(v, k):
    return v[(k - 1) % 6]


def _length_scale(P: DHParams) -> float:
    return max([1.0] + [abs(float(x)) for x in P.b + P.s])


def _eq(name, lhs, rhs, degree=1):
    return Equation(name, lhs, rhs, degree)


def _common_equations(P):
    b, c = P.b, P.c
    eqs = [_eq(f"s{k}=0", _idx(P.s, k), 0) for k in range(1, 7)]
    for k in (1, 2, 3):
        lhs = _idx(b, k) * _idx(c, k + 1) * _idx(b, k + 2)
        rhs = _idx(b, k + 3) * _idx(c, k + 4) * _idx(b, k + 5)
        eqs.append(_eq(f"b{k}c{k + 1}b{k + 2}=b{k + 3}c{(k + 3) % 6 + 1}b{(k + 4) % 6 + 1}", lhs, rhs, 2))
    return eqs


def family1_equations(P: DHParams):
    b, f = P.b, P.f
    eqs = [_eq(f"f{k}=f{k + 3}", _idx(f, k), _idx(f, k + 3)) for k in (1, 2, 3)]
    eqs.append(_eq("b1b3b5=b2b4b6", b[0] * b[2] * b[4], b[1] * b[3] * b[5], 3))
    eqs.append(_eq("b1^2+b3^2+b5^2=b2^2+b4^2+b6^2",
                   b[0] ** 2 + b[2] ** 2 + b[4] ** 2, b[1] ** 2 + b[3] ** 2 + b[5] ** 2, 2))
    return eqs + _common_equations(P)


def family2_equations(P: DHParams):
    b, f = P.b, P.f
    eqs = [_eq("f1=f3", f[0], f[2]), _eq("f3=f5", f[2], f[4]),
           _eq("f2=f4", f[1], f[3]), _eq("f4=f6", f[3], f[5])]
    eqs.append(_eq("b1b3b5f2=b2b4b6f1", b[0] * b[2] * b[4] * f[1], b[1] * b[3] * b[5] * f[0], 4))
    eqs.append(_eq("b1^2+b3^2+b5^2+f2^2=b2^2+b4^2+b6^2+f1^2",
                   b[0] ** 2 + b[2] ** 2 + b[4] ** 2 + f[1] ** 2,
                   b[1] ** 2 + b[3] ** 2 + b[5] ** 2 + f[0] ** 2, 2))
    return eqs + _common_equations(P)


def bricard_equations(P: DHParams):
    b = P.b
    eqs = [_eq(f"c{k}=0", _idx(P.c, k), 0, 0) for k in range(1, 7)]
    eqs += [_eq(f"s{k}=0", _idx(P.s, k), 0) for k in range(1, 7)]
    eqs.append(_eq("b1^2+b3^2+b5^2=b2^2+b4^2+b6^2",
                   b[0] ** 2 + b[2] ** 2 + b[4] ** 2, b[1] ** 2 + b[3] ** 2 + b[5] ** 2, 2))
    return eqs


def dietmaier_equations(P: DHParams):
    b, c, s, f = P.b, P.c, P.s, P.f
    return [
        _eq("b1=b2", b[0], b[1]), _eq("b4=b5", b[3], b[4]), _eq("b3=b6", b[2], b[5]),
        _eq("c3=c6", c[2], c[5], 0), _eq("f1+f2=f4+f5", f[0] + f[1], f[3] + f[4]),
        _eq("s1=s3", s[0], s[2]), _eq("s4=s6", s[3], s[5]),
        _eq("s2=0", s[1], 0), _eq("s5=0", s[4], 0),
    ]


def hooke_equations(P: DHParams):
    """Hooke conditions exactly as published (the distance equation is suspicious)."""
    b, c, s = P.b, P.c, P.s
    d2 = P.d_squared
    return [
        _eq("b1=0", b[0], 0), _eq("b2=0", b[1], 0), _eq("b4=0", b[3], 0), _eq("b5=0", b[4], 0),
        _eq("s2=0", s[1], 0), _eq("s5=0", s[4], 0),
        _eq("d3^2+s3^2+s4^2-2c3s2s4=d6^2+s2^2+s5^2-2c6s1s5",
            d2[2] + s[2] ** 2 + s[3] ** 2 - 2 * c[2] * s[1] * s[3],
            d2[5] + s[1] ** 2 + s[4] ** 2 - 2 * c[5] * s[0] * s[4], 2),
    ]


def hooke_distance_equation(P: DHParams) -> Equation:
    """Geometric form of the Hooke distance condition.

    With ``h1, h2, h3`` through a point ``A`` and ``h4, h5, h6`` through ``B``,
    the squared distance ``|AB|^2`` computed across link 3 and across link 6 must
    agree: ``d3^2 + s3^2 + s4^2 + 2 c3 s3 s4 = d6^2 + s6^2 + s1^2 + 2 c6 s6 s1``.
    """
    c, s = P.c, P.s
    d2 = P.d_squared
    return _eq("d3^2+s3^2+s4^2+2c3s3s4=d6^2+s6^2+s1^2+2c6s6s1",
               d2[2] + s[2] ** 2 + s[3] ** 2 + 2 * c[2] * s[2] * s[3],
               d2[5] + s[5] ** 2 + s[0] ** 2 + 2 * c[5] * s[5] * s[0], 2)


def _flip_patterns(P: DHParams):
    """All 64 parameter sets obtained by reversing axis orientations."""
    for mask in range(64):
        Q = P
        for k in range(1, 7):
            if mask >> (k - 1) & 1:
                Q = Q.flipped(k)
        yield mask, Q


@dataclass
class FamilyReport:
    """Family flags with the residuals of every defining equation.

    ``genus_bound`` comes from the coupling-dimension case table.  For Dietmaier
    the equations are reported for the orientation pattern that satisfied them
    (``dietmaier_flip_mask``, bit ``k-1`` set when ``h_k`` is reversed).
    """

    flags: dict
    equations: dict
    genus_bound: int
    genus_label: str
    coupling_dims: tuple
    dietmaier_flip_mask: int | None = None
    hooke_geometric: Equation | None = None
    notes: list = field(default_factory=list)

    def residuals(self, family):
        return [(e.name, e.residual) for e in self.equations[family]]


def classify(P: DHParams, rtol=FLOAT_RTOL) -> FamilyReport:
    P.validate()
    scale = _length_scale(P)
    hold = lambda eqs: all(e.holds(scale, rtol) for e in eqs)
    equations = {
        "hooke": hooke_equations(P),
        "family1": family1_equations(P),
        "family2": family2_equations(P),
        "bricard_orthogonal": bricard_equations(P),
    }
    flags = {name: hold(eqs) for name, eqs in equations.items()}

    mask_found, witness = None, P
    for mask, Q in _flip_patterns(P):
        if hold(dietmaier_equations(Q)):
            mask_found, witness = mask, Q
            break
    equations["dietmaier"] = dietmaier_equations(witness)
    flags["dietmaier"] = mask_found is not None

    hooke_geo = hooke_distance_equation(P)
    notes = []
    hooke_base = hold(equations["hooke"][:6])
    if hooke_base and flags["hooke"] != hooke_geo.holds(scale, rtol):
        notes.append("published Hooke distance equation and its geometric form disagree; "
                     "flag follows the published form")

    dims = coupling_dimensions_from_dh(P)
    bound, label = genus_bound(dims)
    return FamilyReport({k: flags[k] for k in FAMILIES}, equations, bound, label, dims,
                        mask_found, hooke_geo, notes)


def coupling_dimensions_from_dh(P: DHParams):
    return tuple(coupling_dimension_from_dh(P, k) for k in range(1, 7))


# ---------------------------------------------------------------------------
# Genus bound


def genus_bound(dims, P: DHParams | None = None):
    """Sharpest genus bound from the coupling dimensions of the six triples.

    ``dims[k-1]`` is the dimension for ``(h_k, h_{k+1}, h_{k+2})``; its opposite
    triple ``(h_{k+5}, h_{k+4}, h_{k+3})`` is ``dims[k+2]``.  Returns
    ``(bound, label)``.  If ``dims`` is None it is computed from ``P``.
    """
    if dims is None:
        if P is None:
            raise ValueError("genus_bound needs coupling dimensions or DH parameters")
        dims = coupling_dimensions_from_dh(P)
    dims = tuple(dims)
    if len(dims) != 6 or any(d not in (4, 6, 8) for d in dims):
        raise ValueError(f"coupling dimensions must be six values in {{4, 6, 8}}, got {dims}")
    pairs = [(dims[k], dims[(k + 3) % 6]) for k in range(6)]
    if any(p == (6, 8) for p in pairs):
        return 3, "triple-6-opposite-8"
    if 4 in dims:
        return 5, "concurrent-triple"
    if any(p == (6, 6) for p in pairs):
        return 5, "opposite-triples-6-6"
    if all(d == 8 for d in dims):
        return 5, "all-triples-8"
    return 5, "general"


# ---------------------------------------------------------------------------
# Bond diagrams


class BondDiagram:
    """Connection numbers ``k(i, j)`` between joints of a hexagonal linkage."""

    def __init__(self, connections=None):
        self._k = {}
        for key, value in (connections or {}).items():
            i, j = key
            self.set(i, j, value)

    @staticmethod
    def _key(i, j):
        i, j = (i - 1) % 6 + 1, (j - 1) % 6 + 1
        if i == j:
            raise ValueError(f"a connection needs two different joints, got {i}-{j}")
        if (j - i) % 6 in (1, 5):
            raise ValueError(f"adjacent joints {i} and {j} cannot be connected")
        return (min(i, j), max(i, j))

    def set(self, i, j, value):
        key = self._key(i, j)
        if value:
            self._k[key] = int(value)
        else:
            self._k.pop(key, None)

    def k(self, i, j) -> int:
        return self._k.get(self._key(i, j), 0)

    def items(self):
        return sorted(self._k.items())

    def __eq__(self, other):
        return isinstance(other, BondDiagram) and self._k == other._k

    def __bool__(self):
        return bool(self._k)

    @classmethod
    def parse(cls, spec: str) -> "BondDiagram":
        """Parse ``"1-4:2,2-5:1"``; the empty string is the empty diagram."""
        D = cls()
        spec = spec.strip()
        if not spec:
            return D
        for item in spec.split(","):
            try:
                pair, value = item.split(":")
                i, j = (int(x) for x in pair.split("-"))
                value = int(value)
            except ValueError as exc:
                raise ValueError(f"malformed diagram entry '{item}' (expected i-j:k)") from exc
            if not (1 <= i <= 6 and 1 <= j <= 6):
                raise ValueError(f"joint index out of range in '{item}'")
            D.set(i, j, D.k(i, j) + value)
        return D

    def __str__(self):
        return ",".join(f"{i}-{j}:{v}" for (i, j), v in self.items())

    def __repr__(self):
        return f"BondDiagram({dict(self.items())!r})"


def chain_between(i, j):
    """Joints of the chain from link ``o_i`` to link ``o_j``: ``i+1, ..., j``.

    Joint ``h_k`` connects links ``o_{k-1}`` and ``o_k``.
    """
    i, j = (i - 1) % 6 + 1, (j - 1) % 6 + 1
    out, k = [], i
    while k != j:
        k = k % 6 + 1
        out.append(k)
    return out


def coupler_degree(D: BondDiagram, i, j) -> int:
    """Algebraic degree of the coupler curve ``C_{i,j}``: connections across the cut."""
    if (i - j) % 6 == 0:
        raise ValueError("coupler degree needs two different links")
    side = set(chain_between(i, j))
    return sum(v for (a, b), v in D.items() if (a in side) != (b in side))


@dataclass
class MaximalDiagramReport:
    """Upper bound on the opposite connections; common roots need not be bonds."""

    diagram: BondDiagram
    gcd_degrees: dict
    note: str = ("upper bound: a common root of opposite quad polynomials may be an isolated "
                 "intersection point rather than a bond")


def maximal_bond_diagram(P: DHParams, closed_form=None) -> MaximalDiagramReport:
    """Candidate diagram with ``k(k, k+3) = gcd(Q_k^+, Q_{k+3}^+) + gcd(Q_k^-, Q_{k+3}^-)``."""
    dims = coupling_dimensions_from_dh(P)
    if dims != (8,) * 6:
        raise LinkageError(f"all triple coupling dimensions must be 8, got {dims}")
    report = bond_conditions(P, closed_form=closed_form)
    degrees = report.degrees()
    D = BondDiagram()
    for k in (1, 2, 3):
        D.set(k, k + 3, min(degrees[(k, "+")], 2) + min(degrees[(k, "-")], 2))
    return MaximalDiagramReport(D, degrees)


def cut_enumeration():
    """All 15 link pairs ``(i, j)`` with ``i < j``."""
    return list(itertools.combinations(range(1, 7), 2))
