"""A Hooke-type arrangement built from two concurrent triples of lines.

``h1, h2, h3`` pass through ``A`` and ``h4, h5, h6`` pass through ``B``.  Then
``h1, h2`` and ``h4, h5`` intersect, so ``b1 = b2 = b4 = b5 = 0`` and
``s2 = s5 = 0``.  The closing distances ``d3`` (between ``h3`` and ``h4``) and
``d6`` (between ``h6`` and ``h1``) are free, which is what the distance
condition constrains.
"""
from fractions import Fraction

from hexlink.catalog import rational_unit_vector
from hexlink.dualquat import line_from_point_direction
from hexlink.linkage import Linkage6R, LinkageError


def two_concurrent_triples(rng, span=4):
    while True:
        A = [Fraction(rng.randint(-span, span)) for _ in range(3)]
        B = [Fraction(rng.randint(-span, span)) for _ in range(3)]
        if A == B:
            continue
        axes = [line_from_point_direction(A, rational_unit_vector(rng)) for _ in range(3)]
        axes += [line_from_point_direction(B, rational_unit_vector(rng)) for _ in range(3)]
        try:
            return Linkage6R(axes)
        except LinkageError:
            continue
