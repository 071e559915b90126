"""Acceptance criteria 1-9, each recorded as one PASS/FAIL line in the terminal summary."""
import random
import time
from collections import Counter
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from affquiver.local_quiver import affine_quiver, build_input, field_quiver, local_quiver
from affquiver.oracle import oracle_quiver
from affquiver.quiver import Quiver, VertexLabel, isomorphic, tensor_quiver
from affquiver.rings import (as_table_ring, galois, is_chain_ring, local_data, local_decomposition,
                             make_ring, modular, product)

import zoo

C = VertexLabel.trivial()


def vertex(inp, chi_at_1, rho_on=None):
    """Label of the simple module for the orbit of the character of Z/n with
    ``chi(1) = chi_at_1`` and the stabilizer character agreeing with ``rho_on``."""
    [chi] = [c for c in inp.characters if c(1) == chi_at_1]
    o = inp.orbit_data[inp.orbit_of[chi]]
    rho_on = {g: v for g, v in (rho_on or {}).items() if g in o.stabilizer}
    [j] = [j for j, r in enumerate(o.stabilizer_characters)
           if all(r(g) == v for g, v in rho_on.items())]
    return VertexLabel.simple(o.orbit_id, j, o.size)


def check_golden(q, expected, n_vertices):
    assert len(q.vertices) == n_vertices
    assert q.labelled_arrows() == Counter(expected)


def test_criterion_1_z4(criterion):
    with criterion(1, "golden quiver Z/4"):
        t0 = time.perf_counter()
        R = modular(4)
        q = affine_quiver(R)
        inp = build_input(R)
        base = vertex(inp, Fr(0), {3: Fr(0)})          # chi_0 (x) rho_0
        half = vertex(inp, Fr(1, 2), {3: Fr(0)})       # chi_2 (x) rho_0
        ind = vertex(inp, Fr(1, 4))                    # induced from chi_1
        assert (base.dim, half.dim, ind.dim) == (1, 1, 2)
        check_golden(q, {(base, base): 1, (base, half): 1, (half, ind): 1, (C, half): 1}, 6)
        assert time.perf_counter() - t0 < 1


def test_criterion_2_z8(criterion):
    with criterion(2, "golden quiver Z/8"):
        t0 = time.perf_counter()
        R = modular(8)
        q = affine_quiver(R)
        inp = build_input(R)
        theta0 = {3: Fr(0), 5: Fr(0)}
        theta1 = {3: Fr(1, 2), 5: Fr(0)}
        c0t0, c0t1 = vertex(inp, Fr(0), theta0), vertex(inp, Fr(0), theta1)
        c3t0, c3t1 = vertex(inp, Fr(1, 2), theta0), vertex(inp, Fr(1, 2), theta1)
        ind2 = vertex(inp, Fr(1, 4), {5: Fr(0)})        # chi_2 (x) alpha_0
        ind1 = vertex(inp, Fr(1, 8))
        assert (ind2.dim, ind1.dim) == (2, 4)
        check_golden(q, {
            (c0t1, c0t1): 1, (c0t0, c0t0): 1, (c0t1, c3t1): 1, (c0t0, c3t0): 1,
            (c3t1, ind2): 1, (c3t0, ind2): 1, (ind2, ind1): 1, (C, c3t0): 1}, 12)
        assert q.num_arrows == 8
        assert time.perf_counter() - t0 < 1


def _z9():
    R = modular(9)
    q = affine_quiver(R)
    inp = build_input(R)
    t0 = vertex(inp, Fr(0), {2: Fr(0)})
    t3 = vertex(inp, Fr(0), {2: Fr(1, 2)})
    ind2 = vertex(inp, Fr(1, 3), {4: Fr(0)})           # chi_2 (x) alpha_0
    ind1 = vertex(inp, Fr(1, 9))
    return q, t0, t3, ind2, ind1


def test_criterion_3_z9(criterion):
    with criterion(3, "golden quiver Z/9 (adjacency; middle vertex has dimension 2)"):
        t0 = time.perf_counter()
        q, t0v, t3v, ind2, ind1 = _z9()
        assert (t0v.dim, t3v.dim, ind2.dim, ind1.dim) == (1, 1, 2, 6)
        check_golden(q, {(t0v, t0v): 1, (t3v, t3v): 1, (t0v, ind2): 1, (t3v, ind2): 1,
                         (ind2, ind1): 1, (C, ind2): 1}, 11)
        # the three arrows into the induced-from-{1,4,7} vertex, one arrow on to dimension 6
        assert q.arrows_into(q.index(ind2)) == 3 and q.arrows_out_of(q.index(ind2)) == 1
        assert time.perf_counter() - t0 < 1


@pytest.mark.xfail(strict=True, reason="the orbit of chi_2 has size [U:St] = 6/3 = 2, so the "
                                       "induced module has dimension 2, not 3")
def test_criterion_3_literal_dimension_three(criterion):
    with criterion("3b", "Z/9 middle vertex has dimension 3 as literally stated"):
        q, _, _, ind2, _ = _z9()
        assert ind2.dim == 3, f"dimension is {ind2.dim}"


def _golden_z2_z3():
    """Golden factor quivers of Z/2 and Z/3 with their vertex dimensions."""
    chi0, chi1 = VertexLabel.simple(0, 0, 1), VertexLabel.simple(1, 0, 1)
    q2 = Quiver.build([C, chi0, chi1], {(C, chi1): 1})
    r0, r1, ind = VertexLabel.simple(0, 0, 1), VertexLabel.simple(0, 1, 1), VertexLabel.simple(1, 0, 2)
    q3 = Quiver.build([C, r0, r1, ind], {(C, ind): 1})
    return q2, q3


def _golden_z6_unlabelled():
    verts = [VertexLabel.simple(i, 0, 1) for i in range(1, 13)]
    edges = [(7, 5), (8, 6), (9, 1), (10, 2), (11, 6), (12, 8), (12, 11)]
    return Quiver.build(verts, {(verts[s - 1], verts[t - 1]): 1 for s, t in edges})


def test_criterion_4_z6(criterion):
    with criterion(4, "golden quiver Z/6 via tensor composition"):
        t0 = time.perf_counter()
        q = affine_quiver(modular(6))
        assert len(q.vertices) == 12 and q.num_arrows == 7
        golden = _golden_z6_unlabelled()
        assert isomorphic(q, golden, respect_dimensions=False)
        q2, q3 = _golden_z2_z3()
        labelled_golden = tensor_quiver(q2, q3)
        assert isomorphic(labelled_golden, golden, respect_dimensions=False)
        assert isomorphic(q, labelled_golden, respect_dimensions=True)
        assert time.perf_counter() - t0 < 1


def test_criterion_5_fields(criterion):
    with criterion(5, "field law for q in {2,3,4,5,7,8,9}"):
        t0 = time.perf_counter()
        for q_ in (2, 3, 4, 5, 7, 8, 9):
            q = field_quiver(make_ring(f"GF({q_})"))
            assert len(q.vertices) == q_ + 1
            [((s, t), m)] = q.arrows.items()
            assert m == 1 and q.vertices[s].is_trivial and q.vertices[t].dim == q_ - 1
        assert time.perf_counter() - t0 < 1


ORACLE_SUITE = {
    "Z/4": lambda: modular(4), "Z/8": lambda: modular(8), "Z/9": lambda: modular(9),
    "Z/16": lambda: modular(16), "Z/25": lambda: modular(25), "Z/27": lambda: modular(27),
    "GF(4)": lambda: galois(2, 2), "GF(8)": lambda: galois(2, 3),
    "F2[x,y]/(x,y)^2": lambda: as_table_ring(zoo.f2_xy_square()),
}


def test_criterion_6_oracle(criterion):
    with criterion(6, "oracle equals closed form on the nine-ring suite"):
        t0 = time.perf_counter()
        for name, make in ORACLE_SUITE.items():
            R = make()
            closed, brute = local_quiver(R), oracle_quiver(R)
            assert isomorphic(brute, closed, respect_dimensions=True), name
            assert brute == closed, name
        assert time.perf_counter() - t0 < 600


POOL = [make_ring(s) for s in zoo.SMALL_ATOMS + ["Z/16", "Z/27", "Z/25"]]
POOL += [f() for f in zoo.NON_CHAIN.values()]


def _check_structure(R, q):
    factors = [f.ring for f in local_decomposition(R)]
    [b] = [i for i, v in enumerate(q.vertices) if v.is_trivial]
    assert q.arrows_into(b) == 0
    assert q.arrows_out_of(b) == len(factors)
    for F in factors:
        lq = local_quiver(F)
        assert lq.arrows_into(0) == 0 and lq.arrows_out_of(0) == 1
        assert lq.loops_at(lq.index(VertexLabel.simple(0, 0, 1))) == local_data(F).r
        if is_chain_ring(F):
            assert lq.max_multiplicity() <= 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(POOL), min_size=1, max_size=3))
def _structural_property(rings):
    R = product(rings)
    _check_structure(R, affine_quiver(R))


def test_criterion_7_invariants(criterion):
    with criterion(7, "structural invariants (property-based)"):
        _structural_property()
        for make in ORACLE_SUITE.values():
            R = make()
            _check_structure(R, oracle_quiver(R))


GOLDEN = {
    "Z/4": lambda: modular(4), "Z/8": lambda: modular(8), "Z/9": lambda: modular(9),
    "Z/2": lambda: modular(2), "Z/3": lambda: modular(3),
    **{f"GF({q})": (lambda q=q: make_ring(f"GF({q})")) for q in (4, 5, 7, 8, 9)},
    "F2[x,y]/(x,y)^2": zoo.f2_xy_square,
}


def test_criterion_8_representatives(criterion):
    with criterion(8, "representative independence, 20 trials per golden ring"):
        for name, make in GOLDEN.items():
            R = make()
            ref = local_quiver(R).labelled_arrows()
            for trial in range(20):
                rng = random.Random(1000 * trial + R.order)
                got = local_quiver(R, rng=rng, all_members=False).labelled_arrows()
                assert got == ref, (name, trial)


def test_criterion_9_exactness(criterion):
    with criterion(9, "exactness gates across the oracle suite"):
        suite = dict(ORACLE_SUITE)
        suite.update({k: v for k, v in zoo.NON_CHAIN.items()})
        for name, make in suite.items():
            report = {}
            oracle_quiver(make(), report)       # raises on any non-integral trace or count
            assert report["traces_checked"] > 0
            assert report["max_residual"] < 1e-6, (name, report)
