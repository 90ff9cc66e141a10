import random

import pytest

from hexlink import catalog
from hexlink.classify import classify
from hexlink.linkage import coupling_dimension_from_dh, coupling_dimensions


def _dims(P):
    return tuple(coupling_dimension_from_dh(P, k) for k in range(1, 7))


@pytest.mark.parametrize("gen, flag", [(catalog.random_family1, "family1"),
                                       (catalog.random_family2, "family2"),
                                       (catalog.random_bricard, "bricard_orthogonal")])
def test_generators_produce_family_members(gen, flag):
    rng = random.Random(0)
    for _ in range(10):
        P = gen(rng)
        assert P.is_exact
        assert classify(P).flags[flag]
        if gen is not catalog.random_bricard:
            assert _dims(P) == (8,) * 6


def test_generators_are_seeded():
    a = catalog.random_family2(random.Random(9))
    b = catalog.random_family2(random.Random(9))
    assert a == b


def test_random_linkage_is_generic():
    L = catalog.random_linkage(random.Random(1))
    assert L.is_exact and coupling_dimensions(L) == (8,) * 6


def test_rational_helpers():
    rng = random.Random(2)
    for _ in range(20):
        v = catalog.rational_unit_vector(rng)
        assert sum(x * x for x in v) == 1
        c = catalog.rational_cosine(rng)
        assert -1 < c < 1
