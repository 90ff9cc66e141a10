import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hexlink import catalog
from hexlink.dualquat import EPS, ONE, DualQuaternion, I, J, K, line_from_point_direction, mul
from hexlink.linkage import (DHParams, DegenerateConfiguration, JointParameter, Linkage6R,
                             LinkageError, chain_product, closing_discrepancy, closure_residual,
                             coupling_dimension, coupling_dimension_from_dh, coupling_dimensions,
                             dh_from_lines, flip_axis, lines_from_dh, matrix_rank, move)
from oracles import geometry

Fr = Fraction


def _filler(rng, first):
    """A valid linkage whose first axes are ``first``; the rest are random."""
    while True:
        rest = [line_from_point_direction([Fr(rng.randint(-4, 4)) for _ in range(3)],
                                          catalog.rational_unit_vector(rng)) for _ in range(6 - len(first))]
        try:
            return Linkage6R(list(first) + rest)
        except LinkageError:
            continue


# -- validation ---------------------------------------------------------------

def test_rejects_non_lines_and_parallel_neighbours():
    with pytest.raises(LinkageError, match="not a line"):
        Linkage6R([I + J, J, K, I, J, K])
    with pytest.raises(LinkageError, match="parallel at joint 1"):
        Linkage6R([I, line_from_point_direction((0, 1, 0), (1, 0, 0)), K, I, J, K])
    with pytest.raises(LinkageError, match="coincide"):
        Linkage6R([I, -I, K, I, J, K])
    with pytest.raises(LinkageError):
        Linkage6R([I, J, K])


def test_dh_params_reject_unit_cosine():
    with pytest.raises(LinkageError, match="parallel at joint 1"):
        DHParams.make((1, 0, 0, 0, 0, 0), (0,) * 6, (0,) * 6).validate()
    with pytest.raises(LinkageError):
        lines_from_dh(DHParams.make((1, 0, 0, 0, 0, 0), (0,) * 6, (0,) * 6))


def test_joint_parameter_is_projective():
    assert JointParameter(2, 4) == JointParameter(1, 2)
    assert JointParameter.of(None) == JointParameter.infinity()
    assert JointParameter.of(math.inf).den == 0
    with pytest.raises(ValueError):
        JointParameter(0, 0)


# -- chain products and closure -----------------------------------------------

def test_empty_chain_is_one(rng):
    L = catalog.random_linkage(rng)
    assert chain_product(L, [0] * 6, 2, 2) == ONE


def test_single_factor_at_zero():
    L = _filler(random.Random(1), [I, K + 3 * (EPS * I)])
    assert chain_product(L, [0] * 6, 0, 1) == -I


def test_identity_configuration_closes(rng):
    L = catalog.random_linkage(rng)
    t = [JointParameter.infinity()] * 6
    assert chain_product(L, t, 0, 6) == ONE
    assert closure_residual(L, t) == 0


def test_random_parameters_do_not_close(rng):
    L = catalog.random_linkage(rng)
    t = [Fr(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(6)]
    assert closure_residual(L, t) > Fr(1, 100)


def test_vanishing_product_is_reported_as_degenerate():
    # (i - h)(-i - h) = -(i^2 - h^2) = 0 for a line h and the complex unit i
    from hexlink.scalars import GaussianRational as G
    L = Linkage6R([I, I, J, K, I, J], validate=False)
    with pytest.raises(DegenerateConfiguration):
        closure_residual(L, [G(0, 1), G(0, -1), 1, 1, 1, 1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 5), st.integers(0, 5))
def test_chain_product_is_multiplicative(seed, a, b):
    rng = random.Random(seed)
    L = catalog.random_linkage(rng, generic=False)
    t = [Fr(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(6)]
    i, j = sorted((a, b))
    k = 6
    assert chain_product(L, t, i, k) == mul(chain_product(L, t, i, j), chain_product(L, t, j, k))


# -- DH parameters ---------------------------------------------------------------

def test_dh_of_perpendicular_lines_three_apart():
    L = _filler(random.Random(2), [I, K + 3 * (EPS * I)])
    P = dh_from_lines(L)
    assert P.c[0] == 0 and P.b[0] == 3


def test_dh_of_intersecting_perpendicular_lines():
    L = _filler(random.Random(3), [I, J])
    P = dh_from_lines(L)
    assert P.c[0] == 0 and P.b[0] == 0


def test_dh_against_numpy_geometry(rng):
    for _ in range(20):
        L = catalog.random_linkage(rng, generic=False)
        P = dh_from_lines(L)
        c, d, s = geometry.dh_parameters(L.axes)
        assert np.allclose([float(x) for x in P.c], c, atol=1e-12)
        assert np.allclose(P.d, d, atol=1e-9)
        assert np.allclose([float(x) for x in P.s], s, atol=1e-9)


def test_bricard_round_trip_and_closing_diagnostic(bricard_params, bricard_linkage):
    P = bricard_params
    open_chain = lines_from_dh(P)
    Q = dh_from_lines(open_chain)
    assert Q.c[:5] == P.c[:5] and Q.b[:5] == P.b[:5] and Q.s[1:5] == P.s[1:5]
    assert all(v == 0 for v in Q.s)
    # the open chain does not close by itself; the assembled one does
    assert any(v != 0 for v in closing_discrepancy(P, open_chain).values())
    assert all(abs(v) < 1e-10 for v in closing_discrepancy(P, bricard_linkage).values())
    assert dh_from_lines(bricard_linkage).isclose(P.to_float(), 1e-10)


def test_unit_bennett_ratios_round_trip_exactly():
    P = DHParams.make((0,) * 6, (1,) * 6, (0,) * 6)
    Q = dh_from_lines(lines_from_dh(P))
    assert Q.c[:5] == P.c[:5] and Q.b[:5] == P.b[:5] and Q.s[1:5] == P.s[1:5]


def test_round_trip_with_rational_sines(rng):
    for _ in range(20):
        c = [catalog.rational_cosine(rng) for _ in range(6)]
        b = [Fr(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(6)]
        s = [Fr(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(6)]
        P = DHParams(tuple(c), tuple(b), tuple(s))
        # rational joint rotations (cos, sin) keep the open chain exact and non-planar
        angles = [(Fr(3, 5), Fr(4, 5)), (Fr(5, 13), Fr(-12, 13)), (Fr(-8, 17), Fr(15, 17)), (Fr(0), Fr(1))]
        Q = dh_from_lines(lines_from_dh(P, angles))
        assert Q.c[:5] == P.c[:5] and Q.b[:5] == P.b[:5] and Q.s[1:5] == P.s[1:5]


def test_round_trip_float_irrational_sines(rng):
    P = DHParams.make([0.3, -0.2, 0.5, 0.1, -0.7, 0.4], [1.5, 2, -3, 4, 0.5, 2], [0.1, 1, -2, 0.5, 1, 3], exact=False)
    Q = dh_from_lines(lines_from_dh(P))
    for k in range(5):
        assert Q.c[k] == pytest.approx(P.c[k], abs=1e-12)
        assert Q.b[k] == pytest.approx(P.b[k], abs=1e-12)
    for k in range(1, 5):
        assert Q.s[k] == pytest.approx(P.s[k], abs=1e-12)


def test_exact_synthesis_needs_rational_sines():
    with pytest.raises(LinkageError, match="irrational"):
        lines_from_dh(DHParams.make(("1/2",) * 6, (1,) * 6, (0,) * 6))


def test_flip_rule_on_bricard(bricard_params):
    Q = bricard_params.flipped(2)
    assert Q.c[0] == 0 and Q.c[1] == 0
    assert Q.b[0] == 0 and Q.b[1] == -40
    assert Q.s[1] == 0


def test_flip_twice_is_identity(rng):
    L = catalog.random_linkage(rng, generic=False)
    assert flip_axis(flip_axis(L, 3), 3) == L


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_flip_rule_matches_lines(seed, k):
    L = catalog.random_linkage(random.Random(seed), generic=False)
    assert dh_from_lines(flip_axis(L, k)) == dh_from_lines(L).flipped(k)


def test_dh_unchanged_by_moving_the_chain(rng):
    """Any joint rotation keeps the invariants of every pair it does not break open."""
    for _ in range(10):
        L = catalog.random_linkage(rng, generic=False)
        t = [Fr(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(6)]
        P, Q = dh_from_lines(L), dh_from_lines(move(L, t))
        assert P.c[:5] == Q.c[:5] and P.b[:5] == Q.b[:5] and P.s[1:5] == Q.s[1:5]


# -- coupling dimensions ----------------------------------------------------------

def test_concurrent_triple_has_dimension_four(rng):
    L = _filler(rng, [I, J, K])
    assert coupling_dimension(L, 1) == 4


def test_bennett_triple_has_dimension_six():
    P = DHParams.make(("3/5", "4/5", 0, 0, 0, 0), (2, 2, 1, 3, 5, 7), (0, 0, 1, 2, 3, 4))
    L = lines_from_dh(P)
    assert coupling_dimension(L, 1) == 6
    assert coupling_dimension_from_dh(P, 1) == 6
    # s_2 != 0 breaks it
    P2 = DHParams.make(P.c, P.b, (0, 1, 1, 2, 3, 4))
    assert coupling_dimension(lines_from_dh(P2), 1) == 8


def test_generic_dimensions_are_eight(rng):
    for _ in range(20):
        assert coupling_dimensions(catalog.random_linkage(rng, generic=False)) == (8,) * 6


def test_dimension_from_dh_matches_rank(rng):
    for _ in range(30):
        L = catalog.random_linkage(rng, generic=False)
        P = dh_from_lines(L)
        assert tuple(coupling_dimension_from_dh(P, k) for k in range(1, 7)) == coupling_dimensions(L)


def test_float_rank_matches_exact(rng):
    rows = [[Fr(rng.randint(-3, 3)) for _ in range(5)] for _ in range(3)]
    rows.append([a + b for a, b in zip(rows[0], rows[1])])
    assert matrix_rank(rows) == 3
    assert matrix_rank([[float(x) for x in r] for r in rows]) == 3
