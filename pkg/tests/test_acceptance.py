"""Acceptance criteria, one test (or a small group) per criterion.

Each check records a PASS/FAIL line that is printed immediately and again in
the terminal summary.
"""
import contextlib
import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE
from hexlink import catalog
from hexlink.classify import (BondDiagram, classify, coupler_degree, cut_enumeration, genus_bound,
                              maximal_bond_diagram)
from hexlink.dualquat import I, J, K, line_from_point_direction
from hexlink.linkage import (DHParams, JointParameter, LinkageError, coupling_space, dh_from_lines,
                             flip_axis, lines_from_dh, matrix_rank, move)
from hexlink.motion import TrackerConfig, assemble, mobility_witness, track
from hexlink.quadpoly import (QuadPolynomial, bond_conditions, crosscheck_invariant_vs_elim,
                              derived_invariant_quads, elimination_quads, invariant_quads,
                              invariant_quads_from_lines, quad_poly_elim)
from hexlink.scalars import GaussianRational as G
from oracles import cuts

Fr = Fraction


@contextlib.contextmanager
def criterion(key, text):
    try:
        yield
    except BaseException:
        ACCEPTANCE[key] = (False, text)
        print(f"criterion {key}: FAIL  {text}")
        raise
    ACCEPTANCE[key] = (True, text)
    print(f"criterion {key}: PASS  {text}")


def test_criterion_1_bricard_example(bricard_params):
    with criterion("1", "Bricard example: sums of squares 1649, quads x^2, gcd 2, k = 4"):
        t0 = time.perf_counter()
        P = bricard_params
        b = P.b
        assert b[0] ** 2 + b[2] ** 2 + b[4] ** 2 == b[1] ** 2 + b[3] ** 2 + b[5] ** 2 == 1649
        rep = classify(P)
        assert rep.flags["family1"] and rep.flags["family2"] and rep.flags["bricard_orthogonal"]
        assert all(e.residual == 0 for e in rep.equations["family1"] + rep.equations["family2"])
        Q = invariant_quads(P)
        x2 = QuadPolynomial(G(0), G(0))
        assert all(q == x2 for q in Q.qplus + Q.qminus)
        degrees = bond_conditions(P).degrees()
        assert len(degrees) == 6 and set(degrees.values()) == {2}
        D = maximal_bond_diagram(P).diagram
        assert (D.k(1, 4), D.k(2, 5), D.k(3, 6)) == (4, 4, 4)
        assert time.perf_counter() - t0 < 1.0


def test_criterion_2_genus_four_example():
    with criterion("2", "genus-4 example: bricard_orthogonal (122 = 122) and family2"):
        P = catalog.bricard((4, 3, 5, 7, 9, 8))
        b = P.b
        assert b[0] ** 2 + b[2] ** 2 + b[4] ** 2 == b[1] ** 2 + b[3] ** 2 + b[5] ** 2 == 122
        flags = classify(P).flags
        assert flags["bricard_orthogonal"] and flags["family2"]


@pytest.fixture(scope="module")
def crosschecks():
    rng = random.Random(3)
    t0 = time.perf_counter()
    reps = [crosscheck_invariant_vs_elim(catalog.random_linkage(rng), seed=n) for n in range(100)]
    return reps, time.perf_counter() - t0


@pytest.mark.xfail(strict=True, reason="the published closed form is not the centered elimination "
                                       "polynomial; see the decisions ledger")
def test_criterion_3_published_closed_form_equals_elimination(crosschecks):
    reps, elapsed = crosschecks
    with criterion("3", "published closed form equals centered elimination on 100 linkages, < 60 s"):
        assert elapsed < 60
        assert all(r.match for r in reps)


def test_criterion_3_derived_closed_form_equals_elimination(crosschecks):
    reps, elapsed = crosschecks
    with criterion("3.derived", "derived closed form equals centered elimination exactly on 100 linkages"):
        assert len(reps) >= 100 and elapsed < 60
        assert all(r.match_derived and r.max_deviation_derived == 0 for r in reps)


def _tracked_config(L, n):
    res = track(L, TrackerConfig(max_steps=n))
    assert len(res) > n // 2
    return [JointParameter.from_angle(a) for a in res.samples[-1].theta]


def test_criterion_4_motion_invariance():
    with criterion("4", "moving a mobile linkage keeps the invariant quads; raw quads shift, same w for partners"):
        rng = random.Random(12)
        members = [catalog.random_family1(rng), catalog.random_family2(rng), catalog.bricard()]
        for P in members:
            L = assemble(P)
            M = move(L, _tracked_config(L, rng.randint(8, 20)))
            before, after = invariant_quads_from_lines(L), invariant_quads_from_lines(M)
            scale = max(q.scale() for q in before.qplus + before.qminus)
            assert before.max_deviation(after) < 1e-9 * scale
            dh = dh_from_lines(M)
            assert derived_invariant_quads(dh).max_deviation(derived_invariant_quads(P.to_float())) < 1e-9 * scale
            assert invariant_quads(dh).max_deviation(invariant_quads(P.to_float())) < 1e-9 * scale
            raw0, raw1 = elimination_quads(L), elimination_quads(M)
            w = [r1.root_mean - r0.root_mean for r0, r1 in zip(raw0, raw1)]
            assert max(abs(x) for x in w) > 1e-3          # the raw polynomials do change
            for k in range(6):
                assert raw1[k].isclose(raw0[k].shift(-w[k]), 1e-9)
            for k in range(3):
                assert abs(w[k] - w[k + 3]) < 1e-9 * max(1, abs(w[k]))


def _exact_quads(seed, n):
    rng = random.Random(seed)
    for _ in range(n):
        L = catalog.random_linkage(rng)
        yield L.h(1), L.h(2), L.h(3), L.h(4)


def test_criterion_5_conjugation_symmetries():
    with criterion("5", "conjugation symmetries exact on 100 random linkages"):
        for h1, h2, h3, h4 in _exact_quads(55, 100):
            q = quad_poly_elim(h1, h2, h3, h4)
            assert quad_poly_elim(-h1, h2, h3, -h4) == q.conjugate()
            assert quad_poly_elim(h1, -h2, h3, h4) == q
            assert quad_poly_elim(h1, h2, -h3, h4) == q


def _random_triple(rng):
    """Random triples of lines, biased towards intersecting and parallel pairs."""
    span = rng.choice((0, 1, 5))
    dirs = [catalog.rational_unit_vector(rng, rng.choice((1, 5))) for _ in range(3)]
    return [line_from_point_direction([Fr(rng.randint(-span, span)) for _ in range(3)], d) for d in dirs]


def test_criterion_6_coupling_dimensions():
    with criterion("6", "concurrent triple 4, Bennett triple 6, 1000 random triples even and generically 8"):
        assert matrix_rank(coupling_space([I, J, K])) == 4
        P = DHParams.make(("3/5", "4/5", 0, 0, 0, 0), (2, 2, 1, 3, 5, 7), (0, 0, 1, 2, 3, 4))
        L = lines_from_dh(P)
        assert matrix_rank(coupling_space([L.h(1), L.h(2), L.h(3)])) == 6
        rng = random.Random(66)
        dims = [matrix_rank(coupling_space(_random_triple(rng))) for _ in range(1000)]
        assert all(d % 2 == 0 for d in dims)
        generic = random.Random(67)
        for _ in range(100):
            L = catalog.random_linkage(generic, generic=False)
            assert matrix_rank(coupling_space([L.h(1), L.h(2), L.h(3)])) == 8


def test_criterion_7_dh_conventions():
    with criterion("7", "DH round trip and orientation-flip rule exact on 100 random linkages"):
        rng = random.Random(77)
        angles = [(Fr(3, 5), Fr(4, 5)), (Fr(5, 13), Fr(-12, 13)), (Fr(-8, 17), Fr(15, 17)), (Fr(0), Fr(1))]
        for _ in range(100):
            c = [catalog.rational_cosine(rng) for _ in range(6)]
            b = [Fr(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(6)]
            s = [Fr(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(6)]
            P = DHParams(tuple(c), tuple(b), tuple(s))
            L = lines_from_dh(P, angles)
            Q = dh_from_lines(L)
            assert Q.c[:5] == P.c[:5] and Q.b[:5] == P.b[:5] and Q.s[1:5] == P.s[1:5]
            # placing the measured invariants again reproduces the same table
            R = dh_from_lines(lines_from_dh(Q, angles))
            assert R == Q
            for k in range(1, 7):
                assert dh_from_lines(flip_axis(L, k)) == Q.flipped(k)
        for _ in range(100):
            L = catalog.random_linkage(rng, generic=False)
            P = dh_from_lines(L)
            for k in range(1, 7):
                assert dh_from_lines(flip_axis(L, k)) == P.flipped(k)


def test_criterion_8_coupler_degree():
    with criterion("8", "example query (3,5) gives 2; agrees with cut enumeration on 50 random diagrams"):
        assert coupler_degree(BondDiagram.parse("1-4:1,2-5:1"), 3, 5) == 2
        rng = random.Random(88)
        pairs = [p for p in itertools.combinations(range(1, 7), 2) if (p[1] - p[0]) % 6 not in (1, 5)]
        for _ in range(50):
            conn = {p: rng.randint(0, 4) for p in pairs if rng.random() < 0.6}
            D = BondDiagram(conn)
            assert len(cut_enumeration()) == 15
            for i, j in cut_enumeration():
                assert coupler_degree(D, i, j) == cuts.coupler_degree(conn, i, j)


def test_criterion_9_mobility_witness(bricard_linkage):
    with criterion("9", "Bricard tracks >= 50 samples, rank 5 at >= 90%, < 60 s; generic linkage rigid"):
        t0 = time.perf_counter()
        res = track(bricard_linkage)
        elapsed = time.perf_counter() - t0
        assert len(res) >= 50 and elapsed < 60
        assert all(s.residual < 1e-9 for s in res)
        assert sum(s.jac_rank == 5 for s in res) >= 0.9 * len(res)
        P = dh_from_lines(bricard_linkage)
        for s in res:
            Q = dh_from_lines(move(bricard_linkage, [JointParameter.from_angle(a) for a in s.theta]))
            assert Q.isclose(P, 1e-8)
        assert mobility_witness(bricard_linkage).mobile
        generic = catalog.random_linkage(random.Random(99)).to_float()
        w = mobility_witness(generic)
        assert not w.mobile and w.label == "no motion found at this resolution"


def test_criterion_10_structural_identities():
    with criterion("10", "partner linear coefficients cancel; genus bound <= 5; (6,.,.,8) pattern gives 3"):
        rng = random.Random(1010)
        params = [catalog.random_dh(rng) for _ in range(50)] + [catalog.bricard()]
        params += [catalog.random_family1(rng), catalog.random_family2(rng), catalog.random_bricard(rng)]
        for P in params:
            for Q in (invariant_quads(P), derived_invariant_quads(P)):
                for fam in (Q.qplus, Q.qminus):
                    for k in range(3):
                        assert fam[k].a1 + fam[k + 3].a1 == 0
        for dims in itertools.product((4, 6, 8), repeat=6):
            assert genus_bound(dims)[0] <= 5
        assert genus_bound((6, 8, 8, 8, 8, 8))[0] == 3
        assert genus_bound((8, 8, 6, 8, 8, 8))[0] == 3
