from __future__ import annotations

import json
from fractions import Fraction

import pytest

from bisetcalc.catalog import catalog_group, elementary_abelian
from bisetcalc.characters import character_table, simple_pairs
from bisetcalc.decomposition import (DecompEntry, bound_entry, burnside_multiplicity, cyclic_row,
                                     decompose_induced, e2_report, krq_decomposition, n_matrix,
                                     pair_labels, row_for, simple_group_row)
from bisetcalc.errors import BisetCalcError
from bisetcalc.groups import cyclic_group, out_group
from bisetcalc.linalg import bareiss_det, rank
from bisetcalc.subquotients import iso_class_index, quotients_iso_to

MATRIX_GROUPS = ["C1", "C2", "C5", "C6", "S3", "D8", "Q8", "A4", "C12", "E2^2", "E3^2", "D10"]


def test_entry_validation():
    DecompEntry(3, "upper_bound", "nabla_bound")
    with pytest.raises(ValueError):
        DecompEntry(1, "exact", "nabla_bound")
    with pytest.raises(ValueError):
        DecompEntry(1, "exact", "not_a_quotient")
    with pytest.raises(ValueError):
        DecompEntry(0, "exact", "guesswork")
    assert DecompEntry(2, "upper_bound", "nabla_bound").to_json() == {
        "value": 2, "status": "bound", "provenance": "nabla_bound"}


def test_burnside_examples():
    for p in (2, 3, 5, 7):
        C = cyclic_group(p)
        table = character_table(out_group(C).out)
        assert burnside_multiplicity(C, table[0]) == DecompEntry(1, "exact", "burnside_lemma")
        assert all(burnside_multiplicity(C, V).value == 0 for V in table[1:])
    for p in (2, 3):
        E = elementary_abelian(p)
        assert burnside_multiplicity(E, character_table(out_group(E).out)[0]).value == 0


def _support(G, row):
    labels = pair_labels(G)
    return {labels[c]: e.value for c, e in enumerate(row) if e.value}


def test_cyclic_row_examples():
    for p in (2, 3, 5, 7):
        G = cyclic_group(p)
        table = character_table(out_group(G).out)
        assert _support(G, cyclic_row(G, 1, table[0])) == {f"(C{p},triv)": 1, "(1,triv)": 1}
        for j, V in enumerate(table[1:], start=1):
            row = cyclic_row(G, 1, V)
            assert _support(G, row) == {f"(C{p},chi{j})": 1}
            assert all(e.exact for e in row)
    assert _support(cyclic_group(1), row_for(cyclic_group(1), simple_pairs(cyclic_group(1))[0])) == {
        "(1,triv)": 1}
    with pytest.raises(BisetCalcError):
        cyclic_row(catalog_group("S3"), 3, character_table(out_group(catalog_group("S3")).out)[0])


def test_cyclic_and_simple_rules_agree_on_prime_order():
    for p in (2, 3, 5, 7):
        G = cyclic_group(p)
        for V in character_table(out_group(G).out):
            a, b = cyclic_row(G, 1, V), simple_group_row(G, 1, V)
            assert [e.value for e in a] == [e.value for e in b]
            assert all(e.exact for e in a + b)


def test_simple_group_rows_in_s5():
    S5 = catalog_group("S5")
    idx = iso_class_index(S5)
    a5 = idx.names.index("A5")
    for q in simple_pairs(S5):
        if q.class_index != a5:
            continue
        row = simple_group_row(S5, a5, q.character)
        lab = f"(A5,{'triv' if q.is_trivial else f'chi{q.char_index}'})"
        assert _support(S5, row) == {lab: 1}
    with pytest.raises(BisetCalcError):
        simple_group_row(S5, idx.names.index("S3"), character_table(out_group(idx.reps[1]).out)[0])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_e2_report(p):
    rep = e2_report(p)
    n = p + 1
    assert len(rep.C) == 2 * n and len(rep.basis_labels) == 2 * n
    for i in range(n):
        for j in range(n):
            assert rep.C[i][j] == (p if i == j else 0)
            assert rep.C[n + i][n + j] == (1 if i == j else 0)
            assert rep.C[i][n + j] == rep.C[n + j][i] == (0 if i == j else 1)
    assert rep.detC == rep.detC_formula == (-1) ** p * p * (1 - p) ** (p + 1)
    assert rep.detC == bareiss_det([[Fraction(x) for x in row] for row in rep.C])
    assert (rep.kernel_dim, rep.invariant_dim, rep.n_Cp1) == (p + 1, 1, 1)
    assert json.loads(json.dumps(rep.to_json()))["detC_matches_formula"] is True


def test_e2_determinant_values():
    assert [e2_report(p).detC for p in (2, 3, 5)] == [-2, -48, -20480]


def test_e2_larger_primes():
    for p in (7, 11, 13):
        rep = e2_report(p)
        assert rep.detC == rep.detC_formula
        assert (rep.kernel_dim, rep.invariant_dim) == (p + 1, 1)


def test_e2_rejects_bad_p():
    for p in (1, 4, 17):
        with pytest.raises(BisetCalcError):
            e2_report(p)


def test_e2_kernel_by_direct_solve():
    # the joint kernel of the restrictions: a_k = (1/p) sum_{j != k} b_j
    for p in (2, 3):
        n = p + 1
        rows = [[Fraction(p if i == k else 0) for i in range(n)] + [Fraction(0 if j == k else 1) for j in range(n)]
                for k in range(n)]
        assert 2 * n - rank(rows) == e2_report(p).kernel_dim


def test_bound_entry_examples():
    G = catalog_group("S4")
    pairs = simple_pairs(G)
    idx = iso_class_index(G)
    for a in pairs:
        for b in pairs:
            e = bound_entry(G, a, b)
            if a.class_index == b.class_index:
                assert e.exact and e.provenance == "diagonal_one"
                assert e.value == int(a.char_index == b.char_index)
            elif not quotients_iso_to(idx.reps[a.class_index], idx.reps[b.class_index]):
                assert e == DecompEntry(0, "exact", "not_a_quotient")
            else:
                assert e.provenance == "nabla_bound" and e.value >= 0


@pytest.mark.parametrize("name", MATRIX_GROUPS + ["S4"])
def test_matrix_structure(name):
    G = catalog_group(name)
    M = n_matrix(G)
    idx = iso_class_index(G)
    n = len(M.pairs)
    for r in range(n):
        assert M.entries[r][r] == DecompEntry(1, "exact", M.entries[r][r].provenance)
        for c in range(r + 1, n):
            assert M.entries[r][c].value == 0
        H = idx.reps[M.pairs[r].class_index]
        for c in range(n):
            K = idx.reps[M.pairs[c].class_index]
            if M.entries[r][c].value:
                assert quotients_iso_to(H, K)


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "S4", "E2^2"])
def test_exact_rules_respect_bounds(name):
    G = catalog_group(name)
    M = n_matrix(G)
    for r, a in enumerate(M.pairs):
        for c, b in enumerate(M.pairs):
            e = M.entries[r][c]
            if e.exact and e.provenance in ("burnside_lemma", "e2_computation", "cyclic_theorem"):
                assert e.value <= bound_entry(G, a, b).value


def test_matrix_examples():
    assert n_matrix(cyclic_group(1)).values() == [[1]]
    for p in (2, 3, 5):
        M = n_matrix(cyclic_group(p))
        V = M.values()
        assert V[0][0] == 1 and V[1][:2] == [1, 1]
        for r in range(2, p):
            assert V[r] == [1 if c == r else 0 for c in range(p)]
        assert all(e.exact for row in M.entries for e in row)


def test_e2_row_in_matrix():
    for p in (2, 3):
        G = elementary_abelian(p)
        M = n_matrix(G)
        labels = pair_labels(G)
        top = next(r for r, q in enumerate(M.pairs) if q.class_index == 2 and q.is_trivial)
        row = dict(zip(labels, M.entries[top]))
        assert row[f"(C{p},triv)"] == DecompEntry(1, "exact", "e2_computation")
        assert row["(1,triv)"] == DecompEntry(0, "exact", "burnside_lemma")
        assert row[f"(E{p}^2,triv)"].value == 1
        assert M.annotations[top][0].startswith("p-group row")


def test_decompose_induced_examples():
    G = catalog_group("C5")
    q = next(q for q in simple_pairs(G) if q.class_index == 1 and q.is_trivial)
    rec = decompose_induced(G, q)
    assert rec.render() == "P_{C5,triv} + P_{1,triv}" and rec.fully_determined
    rec = decompose_induced(G, simple_pairs(G)[0])
    assert rec.render() == "P_{1,triv}"

    S5 = catalog_group("S5")
    a5 = iso_class_index(S5).names.index("A5")
    q = next(q for q in simple_pairs(S5) if q.class_index == a5 and not q.is_trivial)
    rec = decompose_induced(S5, q)
    assert rec.render() == f"P_{{A5,chi{q.char_index}}}" and rec.fully_determined

    E = elementary_abelian(3)
    q = next(q for q in simple_pairs(E) if q.class_index == 2 and q.is_trivial)
    rec = decompose_induced(E, q)
    assert rec.render().startswith("P_{E3^2,triv} + P_{C3,triv}")
    assert not rec.fully_determined
    doc = json.loads(json.dumps(rec.to_json()))
    assert doc["terms"][0] == {"P": "{E3^2,triv}", "value": 1, "status": "exact", "provenance": "diagonal_one"}


def test_krq_examples():
    assert [t.name for t in krq_decomposition(cyclic_group(1))] == ["1"]
    assert [t.name for t in krq_decomposition(cyclic_group(5))] == ["1", "C5"]
    assert [t.name for t in krq_decomposition(catalog_group("S3"))] == ["1", "C2", "C3"]
    assert all(t.artin_dim == 1 and t.out_action_trivial for t in krq_decomposition(catalog_group("S4")))


def test_matrix_is_deterministic():
    a = n_matrix(catalog_group("D8")).values()
    b = n_matrix(catalog_group("D8")).values()
    assert a == b
