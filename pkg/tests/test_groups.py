from __future__ import annotations

from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisetcalc.catalog import catalog_group, elementary_abelian, symmetric_group
from bisetcalc.errors import BisetCalcError, GroupTooLarge, InvalidPermutation, NotNormalError
from bisetcalc.groups import (FiniteGroup, GroupHom, Subgroup, are_isomorphic, cyclic_group,
                              group_from_generators, isomorphisms, normal_subgroups, out_group,
                              quotient, subgroups, trivial_subgroup, whole)

SMALL = ["C1", "C2", "C6", "S3", "D8", "Q8", "A4", "E3^2", "C12", "D12"]


def power_set_subgroups(G: FiniteGroup) -> set[frozenset]:
    """Brute-force oracle: every subset closed under the product (|G| <= 12),
    or closures of all small generating sets (|G| <= 24)."""
    elems = list(G.elements())
    found = set()
    if G.order <= 12:
        for r in range(1, G.order + 1):
            for S in combinations(elems, r):
                s = set(S)
                if G.identity in s and all(G.m(a, b) in s for a in S for b in S):
                    found.add(frozenset(s))
        return found
    k = max(1, G.order.bit_length() - 1)  # a subgroup chain has length <= log2 |G|
    for r in range(0, k + 1):
        for S in combinations(elems, r):
            found.add(frozenset(G.closure(S)))
    return found


def test_generators_examples():
    assert group_from_generators(1, []).order == 1
    assert group_from_generators(3, [[[1, 2]], [[1, 2, 3]]]).order == 6
    V = group_from_generators(4, [[[1, 2]], [[3, 4]]])
    assert V.order == 4
    assert all(V.element_orders[x] == 2 for x in V.elements() if x != V.identity)


def test_generators_errors():
    with pytest.raises(InvalidPermutation):
        group_from_generators(0, [])
    with pytest.raises(InvalidPermutation):
        group_from_generators(3, [[1, 1, 2]])
    with pytest.raises(InvalidPermutation):
        group_from_generators(3, [[[1, 4]]])
    with pytest.raises(GroupTooLarge):
        group_from_generators(5, [[[1, 2]], [[1, 2, 3, 4, 5]]], max_order=50)


def test_breadth_first_numbering_is_deterministic():
    a = group_from_generators(4, [[[1, 2]], [[1, 2, 3, 4]]])
    b = group_from_generators(4, [[[1, 2]], [[1, 2, 3, 4]]])
    assert a.key == b.key
    assert a.permutations[0] == (0, 1, 2, 3)
    assert a.permutations[1] == (1, 0, 2, 3)


@pytest.mark.parametrize("name", SMALL + ["S4", "S5", "A5"])
def test_group_axioms(name):
    G = catalog_group(name)
    mul = G.mul
    n = G.order
    for row in mul:
        assert sorted(row.tolist()) == list(range(n))
    for col in mul.T:
        assert sorted(col.tolist()) == list(range(n))
    assert all(G.m(G.identity, x) == x == G.m(x, G.identity) for x in G.elements())
    assert all(G.m(x, G.inverse[x]) == G.identity == G.m(G.inverse[x], x) for x in G.elements())
    for a in range(min(n, 30)):
        for b in range(n):
            for c in range(0, n, max(1, n // 10)):
                assert G.m(G.m(a, b), c) == G.m(a, G.m(b, c))


def test_table_validation():
    FiniteGroup([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    # a Latin square with identity and inverses that is not associative
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(BisetCalcError, match="associative"):
        FiniteGroup(loop)
    with pytest.raises(BisetCalcError, match="Latin"):
        FiniteGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_subgroups_examples():
    assert len(subgroups(cyclic_group(1))) == 1
    for p in (2, 3, 5, 7):
        assert len(subgroups(cyclic_group(p))) == 2
    for p in (2, 3, 5):
        subs = subgroups(elementary_abelian(p))
        assert len(subs) == p + 3
        assert sum(1 for S in subs if S.order == p) == p + 1


@pytest.mark.parametrize("name", SMALL + ["S4", "D8", "C2xC2xC2"])
def test_subgroups_match_power_set_oracle(name):
    if name == "C2xC2xC2":
        from bisetcalc.groups import direct_product

        G = direct_product(elementary_abelian(2), cyclic_group(2))
    else:
        G = catalog_group(name)
    subs = subgroups(G)
    sets = [frozenset(S.elements) for S in subs]
    assert len(sets) == len(set(sets))
    assert set(sets) == power_set_subgroups(G)
    assert all(S.is_valid() for S in subs)
    assert [(S.order, S.elements) for S in subs] == sorted((S.order, S.elements) for S in subs)


def test_known_subgroup_counts():
    assert len(subgroups(catalog_group("S4"))) == 30
    assert len(subgroups(catalog_group("S5"))) == 156
    assert len(subgroups(catalog_group("A5"))) == 59


def test_quotient_examples():
    S3 = catalog_group("S3")
    Q, proj = quotient(S3, whole(S3))
    assert Q.order == 1 and set(proj.image) == {0}
    Q, proj = quotient(S3, trivial_subgroup(S3))
    assert proj.is_bijective and are_isomorphic(Q, S3)
    A3 = next(S for S in subgroups(S3) if S.order == 3)
    Q, proj = quotient(S3, A3)
    assert Q.order == 2 and proj.check()
    C2 = next(S for S in subgroups(S3) if S.order == 2)
    with pytest.raises(NotNormalError, match="not a normal subgroup"):
        quotient(S3, C2)


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "S4", "C12"])
def test_quotient_projection_is_hom_with_right_kernel(name):
    G = catalog_group(name)
    for N in normal_subgroups(G):
        Q, proj = quotient(G, N)
        assert Q.order * N.order == G.order
        assert proj.check()
        assert proj.kernel().elements == N.elements
        # cosets ordered by least member
        firsts = [min(x for x in G.elements() if proj.image[x] == c) for c in range(Q.order)]
        assert firsts == sorted(firsts)


def test_isomorphism_examples():
    C2, C3 = cyclic_group(2), cyclic_group(3)
    assert len(isomorphisms(C2, C2)) == 1
    assert len(isomorphisms(C3, C3)) == 2
    assert isomorphisms(C2, C3) == []
    assert isomorphisms(catalog_group("D8"), catalog_group("Q8")) == []
    assert isomorphisms(catalog_group("C6"), catalog_group("S3")) == []


def test_isomorphism_between_different_presentations():
    S3a = catalog_group("S3")
    S3b = catalog_group("D6")
    isos = isomorphisms(S3a, S3b)
    assert len(isos) == 6
    assert all(h.check() and h.is_bijective for h in isos)


@pytest.mark.parametrize("name", ["C6", "S3", "D8", "Q8", "A4", "S4", "E3^2"])
def test_automorphism_group_closure(name):
    H = catalog_group(name)
    O = out_group(H)
    autos = set(O.automorphisms)
    assert len(autos) == len(isomorphisms(H, H)) == O.aut.order
    for a in list(autos)[:12]:
        for b in autos:
            assert tuple(a[b[x]] for x in H.elements()) in autos
    assert O.inn.is_normal_in()
    assert O.out.order * O.inn.order == O.aut.order
    assert O.section[0] == tuple(H.elements())
    for alpha in O.section:
        assert GroupHom(H, H, alpha).check()


def test_out_group_examples():
    assert out_group(cyclic_group(1)).out.order == 1
    for p in (2, 3, 5, 7):
        assert out_group(cyclic_group(p)).out.order == p - 1
    assert out_group(catalog_group("S4")).out.order == 1
    assert out_group(catalog_group("A5")).out.order == 2
    assert out_group(catalog_group("D8")).out.order == 2
    assert out_group(catalog_group("Q8")).out.order == 6


@pytest.mark.parametrize("p", [2, 3])
def test_out_e2_matches_matrix_count(p):
    # brute force: invertible 2x2 matrices over F_p
    count = sum(1 for a, b, c, d in product(range(p), repeat=4) if (a * d - b * c) % p)
    assert out_group(elementary_abelian(p)).out.order == count == (p * p - 1) * (p * p - p)


def _invariants(G):
    return G.order, sorted(G.element_orders), sorted(G.classes.sizes)


@pytest.mark.parametrize("a,b", [("S3", "D6"), ("C6", "S3"), ("D8", "Q8"), ("A4", "D12"), ("C4", "E2^2")])
def test_isomorphism_implies_invariants(a, b):
    A, B = catalog_group(a), catalog_group(b)
    if isomorphisms(A, B):
        assert _invariants(A) == _invariants(B)


perm4 = st.permutations(list(range(1, 5)))


@settings(max_examples=40, deadline=None)
@given(st.lists(perm4, min_size=1, max_size=3))
def test_random_permutation_groups_are_valid(gens):
    G = group_from_generators(4, [list(g) for g in gens])
    assert 24 % G.order == 0
    subs = subgroups(G)
    assert len({S.elements for S in subs}) == len(subs)
    for N in normal_subgroups(G):
        Q, proj = quotient(G, N)
        assert proj.check()


def test_symmetric_group_orders():
    assert [symmetric_group(n).order for n in range(1, 6)] == [1, 2, 6, 24, 120]


def test_subgroup_invariants():
    G = catalog_group("S4")
    for S in subgroups(G):
        assert G.identity in S
        assert all(G.inverse[x] in S for x in S.elements)
    assert not Subgroup(G, (1,)).is_valid()
    assert Subgroup(G, (G.identity,)).is_valid()
