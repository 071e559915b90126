import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affquiver.rings import (RingAxiomError, RingSpecError, ReducibleModulusError, NotLocalError,
                             as_table_ring, check_axioms, default_modulus, galois, idempotents,
                             is_chain_ring, is_field, is_irreducible, is_local, load_table,
                             local_data, local_decomposition, make_ring, modular, product,
                             table_ring, dump_table)

import zoo


def test_modular_tables():
    R = modular(6)
    assert R.order == 6 and R.zero == 0 and R.one == 1
    assert R.add(4, 5) == 3 and R.mul(4, 5) == 2
    assert R.units == (1, 5)
    assert R.neg(2) == 4 and R.inverse(5) == 5


@pytest.mark.parametrize("n", [0, 1, -3])
def test_modular_rejects_small(n):
    with pytest.raises(RingSpecError):
        modular(n)


def test_galois_gf4_arithmetic():
    F = galois(2, 2)
    # x is element 2, x^2 = x + 1 = element 3 under the default modulus x^2+x+1
    assert F.mul(2, 2) == 3
    assert F.add(2, 3) == 1
    assert F.units == (1, 2, 3)
    assert F.element_name(3) == "x+1"


def test_galois_reducible_modulus():
    with pytest.raises(ReducibleModulusError):
        galois(2, 2, modulus=(1, 0, 1))        # x^2 + 1 = (x+1)^2 over F2


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)])
def test_default_modulus_irreducible_and_first(p, k):
    mod = default_modulus(p, k)
    assert is_irreducible(mod, p)
    # every monic polynomial listed earlier (high coefficients first) is reducible
    for tail in itertools.product(range(p), repeat=k):
        cand = tail[::-1] + (1,)
        if cand == tuple(mod):
            break
        assert not is_irreducible(cand, p)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_galois_is_field(q):
    F = make_ring(f"GF({q})")
    check_axioms(F)
    assert is_field(F)


def test_product_element_order():
    R = product([modular(2), modular(3)])
    assert R.order == 6
    assert R.element_name(4) == "(1,1)"
    assert R.one == 4 and R.zero == 0


def test_table_rejects_nonassociative():
    # commutative, has an identity and inverses, but (1+1)+2 != 1+(1+2)
    add = [[0, 1, 2], [1, 2, 0], [2, 0, 0]]
    mul = [[0, 0, 0], [0, 1, 2], [0, 2, 1]]
    with pytest.raises(RingAxiomError) as info:
        table_ring(3, add, mul, 0, 1)
    assert "associativity" in info.value.axiom


def test_table_rejects_bad_distributivity():
    Z4 = modular(4)
    mul = np.array(Z4.mul_table)
    mul[2, 2] = mul[2, 2] ^ 2               # 2*2 := 2, still commutative
    with pytest.raises(RingAxiomError):
        table_ring(4, Z4.add_table, mul, 0, 1)


@pytest.mark.parametrize("spec", ["", "Z/", "Z/x", "GF(6)", "GF(1)", "Q", "Z/4 x", "table:"])
def test_make_ring_rejects(spec):
    with pytest.raises(RingSpecError):
        make_ring(spec)


def test_make_ring_product_and_table(tmp_path):
    R = make_ring("Z/4 x GF(3)")
    assert R.order == 12 and R.kind == "product"
    path = tmp_path / "r.json"
    path.write_text(dump_table(R))
    T = make_ring(f"table:{path}")
    assert np.array_equal(T.mul_table, R.mul_table)
    assert sorted(f.ring.order for f in local_decomposition(T)) == [3, 4]


def test_load_table_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"order": 2}))
    with pytest.raises(RingSpecError):
        load_table(bad)
    with pytest.raises(RingSpecError):
        load_table(tmp_path / "missing.json")


def _reconstruct(R):
    """Check that the factor projections give a ring isomorphism onto the product."""
    factors = local_decomposition(R)
    proj = np.stack([f.projection for f in factors], axis=1)
    assert len({tuple(r) for r in proj.tolist()}) == R.order
    assert np.prod([f.ring.order for f in factors]) == R.order
    for i, f in enumerate(factors):
        P = f.projection
        assert np.array_equal(P[R.add_table], f.ring.add_table[P[:, None], P[None, :]])
        assert np.array_equal(P[R.mul_table], f.ring.mul_table[P[:, None], P[None, :]])
        assert is_local(f.ring)
    return factors


@pytest.mark.parametrize("n", range(2, 65))
def test_modular_decomposition_reconstructs(n):
    factors = _reconstruct(modular(n))
    # prime powers, by direct trial division
    expect = []
    m, p = n, 2
    while m > 1:
        q = 1
        while m % p == 0:
            m //= p
            q *= p
        if q > 1:
            expect.append(q)
        p += 1
    assert [f.ring.order for f in factors] == expect


@pytest.mark.parametrize("n", [6, 12, 30, 36, 60])
def test_table_scan_matches_factorization(n):
    by_scan = sorted(f.ring.order for f in local_decomposition(as_table_ring(modular(n))))
    by_formula = sorted(f.ring.order for f in local_decomposition(modular(n)))
    assert by_scan == by_formula


def test_z12_idempotents():
    assert idempotents(modular(12)) == [0, 1, 4, 9]


@pytest.mark.parametrize("spec", ["Z/2 x Z/2", "GF(4) x Z/3", "Z/4 x Z/4 x Z/2"])
def test_product_decomposition_reconstructs(spec):
    _reconstruct(make_ring(spec))
    _reconstruct(as_table_ring(make_ring(spec)))


def test_local_data_z8():
    d = local_data(modular(8))
    assert d.maximal_ideal == {0, 2, 4, 6}
    assert d.m_squared == {0, 4}
    assert d.associate_reps == (2,) and d.associate_classes == ({2, 6},)
    assert d.annihilators == ({0, 4},)


def test_local_data_z4():
    d = local_data(modular(4))
    assert d.r == 1 and d.associate_reps == (2,)
    assert d.annihilators == ({0, 2},)


def test_local_data_f2_xy_square():
    R = zoo.f2_xy_square()
    d = local_data(R)
    # by hand: m = span(x, y), m^2 = 0, and the only unit acting nontrivially
    # multiplies by 1 + (stuff in m), which fixes every element of m
    assert len(d.maximal_ideal) == 4 and d.m_squared == {R.zero}
    assert d.r == 3
    assert all(len(c) == 1 for c in d.associate_classes)
    assert all(a == d.maximal_ideal for a in d.annihilators)
    assert not is_chain_ring(R)


@pytest.mark.parametrize("spec,expected", [("Z/5", True), ("GF(9)", True), ("Z/9", False),
                                           ("Z/4", False)])
def test_is_field(spec, expected):
    assert is_field(make_ring(spec)) is expected


def test_is_field_needs_local():
    with pytest.raises(NotLocalError):
        is_field(modular(6))


@pytest.mark.parametrize("spec", ["Z/8", "Z/27", "GF(4)", "Z/25"])
def test_chain_rings(spec):
    assert is_chain_ring(make_ring(spec))


def _brute_associates(R):
    """Associate classes of m minus m^2 by plain loops over the ring."""
    units = [u for u in R.elements if any(R.mul(u, v) == R.one for v in R.elements)]
    m = [a for a in R.elements if a not in units]
    m2 = {R.zero}
    grow = True
    while grow:
        new = {R.add(s, R.mul(a, b)) for s in m2 for a in m for b in m}
        grow = not new <= m2
        m2 |= new
    classes = {frozenset(R.mul(u, a) for u in units) for a in m if a not in m2}
    return classes


@pytest.mark.parametrize("make", [lambda: modular(27), lambda: modular(16), lambda: galois(3, 2),
                                  *zoo.NON_CHAIN.values()])
def test_associate_classes_brute(make):
    R = make()
    assert set(local_data(R).associate_classes) == _brute_associates(R)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(zoo.SMALL_ATOMS), min_size=1, max_size=2))
def test_products_satisfy_axioms(atoms):
    R = make_ring(" x ".join(atoms))
    check_axioms(R)
    _reconstruct(R)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 200))
def test_modular_axioms_property(n):
    R = modular(n)
    if n <= 64:
        check_axioms(R)
    assert len(R.units) == sum(1 for a in range(n) if np.gcd(a, n) == 1)
