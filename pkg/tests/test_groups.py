import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commutator_maps.groups import (GroupError, ResourceCapError, UnsupportedAutomorphisms,
                                    aut_class_orbits, automorphism_action, check_automorphism,
                                    conjugacy_classes, conjugator_transversal, exponent,
                                    generating_pair_matrix, group_new, is_generating_tuple,
                                    min_centralizer_order, perm_from_cycles, power_class,
                                    subgroup_closure)

SMALL = ["C1", "C2", "C6", "S3", "A4", "S4", "A5", "PSL2(2)", "PSL2(3)", "PSL2(4)", "PSL2(5)",
         "PSL2(7)", "S3xC2", "C2xC2"]


def test_orders():
    assert group_new("A5").order == 60
    assert group_new("PSL2(7)").order == 168
    assert group_new("PSL2(4)").order == 60
    assert group_new("S8").order == 40320
    assert group_new("S3xC2").order == 12


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_psl2_order_formula(q):
    assert group_new(f"PSL2({q})").order == q * (q * q - 1) // math.gcd(2, q - 1)


@pytest.mark.parametrize("desc", ["A2", "A10", "S9", "S1", "PSL2(6)", "PSL2(17)", "C0", "B5", "C10001"])
def test_unsupported_descriptors(desc):
    with pytest.raises(GroupError):
        group_new(desc)


def test_product_cap():
    with pytest.raises(ResourceCapError):
        group_new("A7xA5")


@pytest.mark.parametrize("desc", SMALL)
def test_group_axioms_exhaustive(desc):
    G = group_new(desc)
    n = G.order
    T = G.table.astype(np.int64)
    assert np.array_equal(T[0], np.arange(n)) and np.array_equal(T[:, 0], np.arange(n))
    a = np.arange(n)
    assert np.all(T[a, G.inverse] == 0)
    for row in T:
        assert np.unique(row).size == n
    A, B, C = np.meshgrid(a, a, a, indexing="ij")
    assert np.array_equal(T[T[A, B], C], T[A, T[B, C]])


@pytest.mark.parametrize("desc", ["S5", "A6", "PSL2(8)", "PSL2(13)", "A7"])
def test_associativity_sampled(desc):
    G = group_new(desc)
    rng = np.random.default_rng(1)
    a, b, c = rng.integers(0, G.order, (3, 2000))
    assert np.array_equal(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)))


@pytest.mark.parametrize("desc", ["A5", "S4", "PSL2(9)", "PSL2(8)", "C7", "S3xC2"])
def test_encode_decode_roundtrip(desc):
    G = group_new(desc)
    for g in range(G.order):
        assert G.encode(G.decode(g)) == g


def test_psl2_canonical_representative():
    G = group_new("PSL2(7)")
    F = G.field
    for g in range(G.order):
        m = G.decode(g)
        neg = tuple(F.neg(x) for x in m)
        assert m <= neg
        det = F.add(F.mul(m[0], m[3]), F.neg(F.mul(m[1], m[2])))
        assert det == 1


def test_permutation_convention():
    G = group_new("S3")
    a, b = G.encode("(1 2)"), G.encode("(1 3)")
    # (1 2) first, then (1 3): 1 -> 2 -> 2, 2 -> 1 -> 3, 3 -> 3 -> 1
    assert G.decode(G.mul(a, b)) == perm_from_cycles(3, "(1 2 3)")


def test_subgroup_closure_examples():
    A5 = group_new("A5")
    assert subgroup_closure(A5, [A5.encode("(1 2 3)")]).size == 3
    assert subgroup_closure(A5, [A5.encode("(1 2 3)"), A5.encode("(3 4 5)")]).size == 60
    S3 = group_new("S3")
    assert subgroup_closure(S3, [S3.encode("(1 2)"), S3.encode("(1 2 3)")]).size == 6


def test_closure_without_early_exit_is_a_subgroup():
    G = group_new("S4")
    H = subgroup_closure(G, [G.encode("(1 2)"), G.encode("(3 4)")], early_exit=False)
    assert H.size == 4
    prods = G.mul(H[:, None], H[None, :])
    assert set(np.unique(prods)) == set(H)


def test_is_generating_examples():
    assert is_generating_tuple(group_new("C2"), (0, 1))
    A5 = group_new("A5")
    assert not is_generating_tuple(A5, (A5.encode("(1 2 3)"),))
    S3 = group_new("S3")
    assert is_generating_tuple(S3, (S3.encode("(1 2)"), S3.encode("(1 3)")))


def test_class_examples():
    assert conjugacy_classes(group_new("A5")).sizes == (1, 15, 20, 12, 12)
    assert sorted(conjugacy_classes(group_new("S3")).sizes) == [1, 2, 3]
    assert conjugacy_classes(group_new("C1")).k == 1
    cd = group_new("PSL2(7)").classes
    assert cd.sizes == (1, 21, 56, 42, 24, 24)
    assert cd.orders == (1, 2, 3, 4, 7, 7)


@pytest.mark.parametrize("desc,k", [("S8", 22), ("A9", 18), ("PSL2(16)", 17), ("PSL2(9)", 7),
                                    ("PSL2(13)", 9), ("S3xC2", 6)])
def test_class_counts(desc, k):
    assert group_new(desc).classes.k == k


@pytest.mark.parametrize("desc", SMALL + ["S5", "PSL2(8)", "A6"])
def test_class_invariants(desc):
    G = group_new(desc)
    cd = G.classes
    assert sum(cd.sizes) == G.order
    assert all(G.order % s == 0 for s in cd.sizes)
    keys = [(o, s, r) for o, s, r in zip(cd.orders, cd.sizes, cd.reps)]
    assert keys == sorted(keys)
    rng = np.random.default_rng(0)
    g, x = rng.integers(0, G.order, (2, 500))
    assert np.array_equal(cd.class_of[G.conjugate(g, x)], cd.class_of[g])
    for t, r in enumerate(cd.reps):
        assert cd.class_of[r] == t
        assert cd.inverse_class[t] == cd.class_of[G.inv(r)]


def test_min_centralizer_order():
    # the 3-cycles (20 of them) have the smallest centralizer in A5
    assert min_centralizer_order(group_new("A5")) == 3
    assert min_centralizer_order(group_new("PSL2(7)")) == 3
    assert min_centralizer_order(group_new("C12")) == 12


def test_power_class_and_exponent():
    G = group_new("A5")
    assert power_class(G, 3, 2) == 4
    assert exponent(G) == 30
    assert exponent(group_new("PSL2(7)")) == 84


@pytest.mark.parametrize("desc", ["A5", "PSL2(7)", "S4", "PSL2(9)", "C12"])
def test_conjugator_transversal(desc):
    G = group_new(desc)
    cd = G.classes
    conj = conjugator_transversal(G)
    for g in range(G.order):
        rep = cd.reps[cd.class_of[g]]
        assert G.conjugate(rep, int(conj[g])) == g


def test_automorphism_examples():
    A5 = group_new("A5")
    act = automorphism_action(A5)
    assert act.out_order == 2
    orb = aut_class_orbits(A5, act)
    assert (3, 4) in orb.orbits
    P = group_new("PSL2(7)")
    pact = automorphism_action(P)
    assert pact.out_order == 2
    assert (4, 5) in aut_class_orbits(P, pact).orbits
    assert automorphism_action(group_new("C2")).out_order == 1
    assert automorphism_action(group_new("S5")).out_order == 1
    assert automorphism_action(group_new("PSL2(8)")).out_order == 3
    assert automorphism_action(group_new("PSL2(9)")).out_order == 4
    assert automorphism_action(group_new("C12")).out_order == 4


def test_a6_refused():
    with pytest.raises(UnsupportedAutomorphisms, match="exceptional outer automorphism"):
        automorphism_action(group_new("A6"))
    with pytest.raises(UnsupportedAutomorphisms):
        automorphism_action(group_new("S3xC2"))


@pytest.mark.parametrize("desc", ["A5", "A7", "S5", "PSL2(7)", "PSL2(8)", "PSL2(9)", "PSL2(16)", "C10"])
def test_automorphisms_are_automorphisms(desc):
    G = group_new(desc)
    cd = G.classes
    for phi in automorphism_action(G).maps:
        assert check_automorphism(G, phi)
        assert phi[0] == 0
        img = cd.class_of[phi[np.asarray(cd.reps)]]
        assert [cd.sizes[i] for i in img] == list(cd.sizes)
        assert [cd.orders[i] for i in img] == list(cd.orders)


def test_identity_orbit_is_singleton():
    for desc in ["A5", "PSL2(7)", "C6"]:
        G = group_new(desc)
        assert aut_class_orbits(G, automorphism_action(G)).orbits[0] == (0,)


@pytest.mark.parametrize("desc", ["C2", "C6", "S3", "A4", "A5", "S3xC2"])
def test_generating_pair_matrix_matches_closure(desc):
    G = group_new(desc)
    M = generating_pair_matrix(G)
    for g in range(G.order):
        for h in range(G.order):
            assert M[g, h] == is_generating_tuple(G, (g, h))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A5", "S4", "PSL2(7)"]), st.data())
def test_generation_invariant_under_conjugation(desc, data):
    G = group_new(desc)
    g, h, x = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert is_generating_tuple(G, (g, h)) == is_generating_tuple(
        G, (G.conjugate(g, x), G.conjugate(h, x)))
