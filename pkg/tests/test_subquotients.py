from __future__ import annotations

import pytest

from bisetcalc.catalog import catalog_group, elementary_abelian
from bisetcalc.groups import are_isomorphic, cyclic_group, isomorphisms, quotient, subgroups
from bisetcalc.subquotients import iso_class_index, quotients_iso_to, subquotients

GROUPS = ["C1", "C5", "C6", "S3", "D8", "Q8", "A4", "S4", "E2^2", "E3^2"]


def test_subquotient_examples():
    assert len(subquotients(cyclic_group(1))) == 1
    for p in (2, 3, 5):
        assert len(subquotients(cyclic_group(p))) == 3
        sqs = subquotients(elementary_abelian(p))
        assert sum(1 for sq in sqs if sq.order == p) == 2 * p + 2
        assert sum(1 for sq in sqs if sq.order == p and sq.ker.order == 1) == p + 1


@pytest.mark.parametrize("name", GROUPS)
def test_subquotient_invariants(name):
    G = catalog_group(name)
    sqs = subquotients(G)
    keys = [sq.key for sq in sqs]
    assert len(keys) == len(set(keys))
    assert keys == sorted(keys, key=lambda k: (len(k[0]), k[0], k[1]))
    expected = sum(1 for H in subgroups(G) for N in subgroups(G)
                   if N.issubset(H) and N.is_normal_in(H))
    assert len(sqs) == expected
    for sq in sqs:
        assert sq.ker.issubset(sq.sub) and sq.ker.is_normal_in(sq.sub)
        assert sq.group.order * sq.ker.order == sq.sub.order
        assert sq.proj.check()
        assert len(set(sq.proj.image)) == sq.group.order
        Hg, emb = sq.sub.as_group
        assert tuple(emb[x] for x in sq.proj.kernel().elements) == sq.ker.elements
        Q, _ = quotient(Hg, sq.proj.kernel())
        assert are_isomorphic(Q, sq.group)


def test_iso_class_examples():
    idx = iso_class_index(cyclic_group(1))
    assert len(idx) == 1 and idx.reps[0].order == 1
    idx = iso_class_index(catalog_group("S3"))
    assert idx.names == ["1", "C2", "C3", "S3"]
    for p in (2, 3, 5):
        idx = iso_class_index(elementary_abelian(p))
        assert [R.order for R in idx.reps] == [1, p, p * p]


@pytest.mark.parametrize("name", GROUPS)
def test_iso_class_partition(name):
    G = catalog_group(name)
    idx = iso_class_index(G)
    assert idx.reps[0].order == 1
    assert are_isomorphic(idx.reps[-1], G)
    orders = [R.order for R in idx.reps]
    assert orders == sorted(orders)
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            assert not isomorphisms(idx.reps[a], idx.reps[b], first_only=True)
    assert sorted(set(idx.members)) == list(range(len(idx)))
    for k, sq in enumerate(idx.sqs):
        iso = idx.chosen_iso[k]
        assert iso.target is idx.reps[idx.members[k]]
        assert iso.check() and iso.is_bijective


def test_quotients_iso_to_examples():
    S3 = catalog_group("S3")
    assert [N.order for N in quotients_iso_to(S3, S3)] == [1]
    assert quotients_iso_to(S3, cyclic_group(3)) == []
    assert [N.order for N in quotients_iso_to(S3, cyclic_group(2))] == [3]
    for p in (2, 3, 5):
        Ns = quotients_iso_to(elementary_abelian(p), cyclic_group(p))
        assert len(Ns) == p + 1 and all(N.order == p for N in Ns)


@pytest.mark.parametrize("name", ["S4", "D8", "Q8", "A4"])
def test_quotients_iso_to_matches_subquotients(name):
    R = catalog_group(name)
    top = [sq for sq in subquotients(R) if sq.sub.order == R.order]
    for K in iso_class_index(R).reps:
        via_sq = [sq.ker.elements for sq in top if are_isomorphic(sq.group, K)]
        assert [N.elements for N in quotients_iso_to(R, K)] == via_sq
