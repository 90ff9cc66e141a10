"""Reference linkages and seeded random generators (exact rational by default)."""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .dualquat import line_from_point_direction
from .linkage import DHParams, Linkage6R, LinkageError, coupling_dimensions

#: Orthogonal Bricard linkage lying on both genus-5 families.
BRICARD_B = (0, 40, 32, 0, 25, 7)
#: Orthogonal Bricard linkage with a genus-4 configuration curve.
BRICARD_GENUS4_B = (4, 3, 5, 7, 9, 8)


def bricard(b=BRICARD_B) -> DHParams:
    """Orthogonal Bricard parameters: all twists 90 degrees, zero offsets."""
    return DHParams.make((0,) * 6, b, (0,) * 6)


def rational_unit_vector(rng: random.Random, span=5):
    """Unit vector with rational coordinates (inverse stereographic projection)."""
    p = Fraction(rng.randint(-span, span), rng.randint(1, 4))
    q = Fraction(rng.randint(-span, span), rng.randint(1, 4))
    n = p * p + q * q + 1
    v = (2 * p / n, 2 * q / n, (p * p + q * q - 1) / n)
    if rng.random() < 0.5:
        v = tuple(-x for x in v)
    return v


def rational_cosine(rng: random.Random, span=6):
    """A cosine ``(1 - m^2)/(1 + m^2)`` with rational sine, never +-1."""
    while True:
        m = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if m != 0:
            return (1 - m * m) / (1 + m * m)


def random_linkage(rng: random.Random, span=5, generic=True, tries=1000) -> Linkage6R:
    """Random exact linkage; with ``generic`` all triple coupling dimensions are 8."""
    for _ in range(tries):
        axes = [line_from_point_direction([Fraction(rng.randint(-span, span)) for _ in range(3)],
                                          rational_unit_vector(rng)) for _ in range(6)]
        try:
            L = Linkage6R(axes)
        except LinkageError:
            continue
        if generic and (coupling_dimensions(L) != (8,) * 6 or _opposite_parallel(L)):
            continue
        return L
    raise RuntimeError("could not draw a random linkage")


def _opposite_parallel(L):
    from .dualquat import _cross
    for k in range(1, 4):
        if all(x == 0 for x in _cross(L.h(k).direction, L.h(k + 3).direction)):
            return True
    return False


def random_dh(rng: random.Random, span=6) -> DHParams:
    """Generic DH parameters with rational cosines and sines."""
    c = [rational_cosine(rng) for _ in range(6)]
    b = [Fraction(rng.randint(-span * 4, span * 4), rng.randint(1, 4)) for _ in range(6)]
    s = [Fraction(rng.randint(-span * 4, span * 4), rng.randint(1, 4)) for _ in range(6)]
    return DHParams(tuple(c), tuple(b), tuple(s))


def random_bricard(rng: random.Random, span=12) -> DHParams:
    """Random orthogonal Bricard linkage: ``b1^2 + b3^2 + b5^2 = b2^2 + b4^2 + b6^2``."""
    while True:
        b1, b2, b3, b4 = (Fraction(rng.randint(-span, span)) for _ in range(4))
        X = b1 * b1 + b3 * b3 - b2 * b2 - b4 * b4
        m = Fraction(rng.randint(1, span), rng.randint(1, 3)) * rng.choice((-1, 1))
        b5 = (X / m - m) / 2
        b6 = (X / m + m) / 2
        b = (b1, b2, b3, b4, b5, b6)
        if sum(1 for x in b if x == 0) <= 2:
            return DHParams((Fraction(0),) * 6, b, (Fraction(0),) * 6)


def _cos_below(rng, bound):
    """Random rational in (-bound, bound) for a positive ``bound``."""
    return Fraction(rng.randint(-99, 99), 100) * bound


def _matching_tuples(n, limit):
    """Non-permuted integer n-tuples grouped by equal product and sum of squares."""
    groups = {}
    for t in itertools.combinations_with_replacement(range(1, limit + 1), n):
        key = (math.prod(t), sum(x * x for x in t))
        groups.setdefault(key, []).append(t)
    return [g for g in groups.values() if len(g) > 1]


_CACHE = {}


def _matched_pair(rng, n, limit):
    """Two tuples of length ``n`` with equal product and sum of squares, shuffled and signed."""
    key = (n, limit)
    if key not in _CACHE:
        _CACHE[key] = _matching_tuples(n, limit)
    t1, t2 = (list(t) for t in rng.sample(rng.choice(_CACHE[key]), 2))
    rng.shuffle(t1)
    rng.shuffle(t2)
    # equal numbers of sign flips in both keep the products equal
    flips = rng.randint(0, n)
    for t in (t1, t2):
        for idx in rng.sample(range(n), flips):
            t[idx] = -t[idx]
    return [Fraction(x) for x in t1], [Fraction(x) for x in t2]


def _no_bennett_pairs(b):
    return all(b[k] ** 2 != b[(k + 1) % 6] ** 2 for k in range(6))


def random_family1(rng: random.Random, limit=40) -> DHParams:
    """Random member of the first genus-5 family with all triple coupling dimensions 8.

    ``(b1, b3, b5)`` and ``(b2, b4, b6)`` are integer triples with equal product
    and equal sum of squares; the cosines follow from ``f_k = f_{k+3}``.
    """
    while True:
        odd, even = _matched_pair(rng, 3, limit)
        b = (odd[0], even[0], odd[1], even[1], odd[2], even[2])
        if not _no_bennett_pairs(b):
            continue
        c = [None] * 6
        for k in range(3):
            c[k] = _cos_below(rng, min(1, abs(b[k + 3] / b[k])))
            c[k + 3] = b[k] * c[k] / b[k + 3]
        if all(-1 < x < 1 for x in c) and all(x != 0 for x in c):
            return DHParams(tuple(c), b, (Fraction(0),) * 6)


def random_family2(rng: random.Random, limit=16) -> DHParams:
    """Random member of the second genus-5 family with all triple coupling dimensions 8.

    ``(b1, b3, b5, f2)`` and ``(b2, b4, b6, f1)`` are integer quadruples with
    equal product and equal sum of squares, which is exactly the pair of
    family equations once ``f1 = f3 = f5`` and ``f2 = f4 = f6``.
    """
    while True:
        q1, q2 = _matched_pair(rng, 4, limit)
        # put the smallest entry of each quadruple into the f slot
        q1.sort(key=abs)
        q2.sort(key=abs)
        F2, F1 = q1[0], q2[0]
        rng.shuffle(q1 := q1[1:])
        rng.shuffle(q2 := q2[1:])
        b = (q1[0], q2[0], q1[1], q2[1], q1[2], q2[2])
        f = (F1, F2) * 3
        if F1 == 0 or F2 == 0 or not _no_bennett_pairs(b):
            continue
        c = tuple(fk / bk for fk, bk in zip(f, b))
        if all(-1 < x < 1 for x in c):
            return DHParams(c, b, (Fraction(0),) * 6)
