"""Multiplicities of projective indecomposables in induced simple functors.

Rows are indexed by simple pairs (H, V), columns by (K, W); an entry is the
multiplicity of P_{K,W} in the functor induced from the simple native Mackey
functor S_{H,V}.  Entries carry their provenance: exact ones come from a
theorem-backed rule, the rest are upper bounds from the Ind_rho^nabla route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .bisets import AtomicModule, ind_rho_nabla, transported_character
from .catalog import elementary_abelian
from .characters import (Character, SimplePair, artin_quotient_dim, codef_krq_dim,
                         multiplicity, simple_pairs)
from .errors import BisetCalcError, InternalFault
from .groups import FiniteGroup, find_isomorphism, subgroups
from .linalg import bareiss_det, rank
from .subquotients import iso_class_index, quotients_iso_to

EXACT, BOUND = "exact", "upper_bound"
PROVENANCES = ("diagonal_one", "not_a_quotient", "cyclic_theorem", "burnside_lemma",
               "simple_group_theorem", "trivial_group", "e2_computation", "nabla_bound")


@dataclass(frozen=True)
class DecompEntry:
    value: int
    status: str
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance}")
        if self.status == EXACT and self.provenance == "nabla_bound":
            raise ValueError("a nabla bound cannot be exact")
        if self.provenance == "not_a_quotient" and self.value:
            raise ValueError("non-quotient entries are zero")

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def to_json(self) -> dict:
        return {"value": self.value, "status": "exact" if self.exact else "bound",
                "provenance": self.provenance}


def _is_trivial(chi: Character) -> bool:
    return all(v == 1 for v in chi.values)


def _is_quotient(H: FiniteGroup, K: FiniteGroup) -> bool:
    return bool(quotients_iso_to(H, K))


def _locate(G: FiniteGroup, H: FiniteGroup, V: Character) -> AtomicModule:
    """The class of G isomorphic to H, with V moved onto Out of its representative."""
    idx = iso_class_index(G)
    c = idx.class_of(H)
    if c is None:
        raise BisetCalcError("group is not a subquotient of the ambient group")
    rep = idx.reps[c]
    if rep.key == H.key:
        return AtomicModule(c, V)
    return AtomicModule(c, transported_character(rep, find_isomorphism(rep, H), V))


# -- Burnside multiplicity ------------------------------------------------------------

_ARTIN: dict[str, tuple[int, bool, int]] = {}


def _artin_evidence(H: FiniteGroup) -> tuple[int, bool, int]:
    hit = _ARTIN.get(H.key)
    if hit is None:
        dim, trivial = artin_quotient_dim(H)
        hit = _ARTIN[H.key] = (dim, trivial, codef_krq_dim(H))
    return hit


def burnside_multiplicity(H: FiniteGroup, V: Character) -> DecompEntry:
    """Multiplicity of P_{1,1}: 1 iff H is cyclic and V trivial."""
    dim, trivial, codef = _artin_evidence(H)
    expected = (1, True) if H.is_cyclic else (0, True)
    if (dim, trivial or dim == 0) != expected or codef != dim:
        raise InternalFault(f"Artin quotient evidence {dim, trivial, codef} contradicts cyclicity of H")
    value = int(H.is_cyclic and _is_trivial(V))
    return DecompEntry(value, EXACT, "burnside_lemma")


# -- exact rows -----------------------------------------------------------------------

def _row_template(G: FiniteGroup, i: int):
    idx = iso_class_index(G)
    H = idx.reps[i]
    return idx, H, simple_pairs(G)


def trivial_row(G: FiniteGroup) -> list[DecompEntry]:
    pairs = simple_pairs(G)
    return [DecompEntry(1, EXACT, "trivial_group") if q.class_index == 0
            else DecompEntry(0, EXACT, "not_a_quotient") for q in pairs]


def cyclic_row(G: FiniteGroup, i: int, V: Character) -> list[DecompEntry]:
    """Exact row for a cyclic class, computed with H itself as the ambient group."""
    idx, C, pairs = _row_template(G, i)
    if not C.is_cyclic:
        raise BisetCalcError("cyclic_row needs a cyclic class")
    D = _locate(C, C, V)
    chars: dict[int, Character] = {}
    row = []
    for q in pairs:
        K = idx.reps[q.class_index]
        if not _is_quotient(C, K):
            row.append(DecompEntry(0, EXACT, "not_a_quotient"))
            continue
        if q.class_index not in chars:
            chars[q.class_index] = ind_rho_nabla(C, D, K)
        row.append(DecompEntry(multiplicity(chars[q.class_index], q.character), EXACT, "cyclic_theorem"))
    burn = burnside_multiplicity(C, V).value
    if row[0].value != burn:
        raise InternalFault("cyclic row disagrees with the Burnside multiplicity")
    return row


def simple_group_row(G: FiniteGroup, i: int, V: Character) -> list[DecompEntry]:
    idx, H, pairs = _row_template(G, i)
    if not H.is_simple:
        raise BisetCalcError("simple_group_row needs a simple class")
    row = []
    for q in pairs:
        if q.class_index == i:
            row.append(DecompEntry(int(q.character == V), EXACT, "simple_group_theorem"))
        elif q.class_index == 0:
            row.append(burnside_multiplicity(H, V))
        else:
            row.append(DecompEntry(0, EXACT, "not_a_quotient"))
    return row


# -- the elementary abelian computation ------------------------------------------------

@dataclass
class E2Report:
    p: int
    basis_labels: list[str]
    C: list[list[Fraction]]
    detC: Fraction
    detC_formula: int
    kernel_dim: int
    invariant_dim: int
    n_Cp1: int

    def to_json(self) -> dict:
        return {"p": self.p, "basis_labels": self.basis_labels,
                "C": [[_frac(x) for x in row] for row in self.C],
                "detC": _frac(self.detC), "detC_formula": _frac(self.detC_formula),
                "detC_matches_formula": self.detC == self.detC_formula,
                "kernel_dim": self.kernel_dim, "invariant_dim": self.invariant_dim, "n_Cp1": self.n_Cp1}


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def _aut_generators(E: FiniteGroup, p: int) -> list[tuple[int, ...]]:
    """Automorphisms of E = C_p x C_p generating Aut(E) = GL_2(p)."""
    x = next(g for g in E.elements() if E.element_orders[g] == p)
    y = next(g for g in E.elements() if E.element_orders[g] == p and g not in E.closure([x]))
    coords = {}
    for a in range(p):
        for b in range(p):
            coords[E.m(E.power(x, a), E.power(y, b))] = (a, b)
    gen = next(g for g in range(1, p) if all(pow(g, k, p) != 1 for k in range(1, p - 1))) if p > 2 else 1

    def from_images(xi: int, yi: int) -> tuple[int, ...]:
        return tuple(E.m(E.power(xi, coords[g][0]), E.power(yi, coords[g][1])) for g in E.elements())

    return [from_images(E.power(x, gen), y),   # diag(g, 1)
            from_images(y, x),                  # swap
            from_images(x, E.m(x, y))]          # transvection


def e2_report(p: int) -> E2Report:
    """Restriction/deflation matrix of the order-p subquotients of C_p x C_p."""
    if not _is_prime(p) or p > 13:
        raise BisetCalcError("e2 needs a prime p <= 13")
    E = elementary_abelian(p)
    A = [S for S in subgroups(E) if S.order == p]
    n = len(A)
    if n != p + 1:
        raise InternalFault(f"expected {p + 1} subgroups of order p, found {n}")
    order = E.order

    def meet(S, T) -> int:
        return len(set(S.elements) & set(T.elements))

    def join(S, T) -> int:
        return S.order * T.order // meet(S, T)

    # a term survives only when the intermediate section still has order p
    res_tin_A = [[Fraction(order, join(A[i], A[j])) if meet(A[i], A[j]) == p else 0 for j in range(n)]
                 for i in range(n)]
    res_tin_Q = [[int(A[i].order // meet(A[i], A[j]) == p) for j in range(n)] for i in range(n)]
    def_tin_A = [[int(A[j].order // meet(A[j], A[i]) == p) for j in range(n)] for i in range(n)]
    def_tin_Q = [[int(order // join(A[i], A[j]) == p) for j in range(n)] for i in range(n)]
    C = [[Fraction(v) for v in res_tin_A[i] + res_tin_Q[i]] for i in range(n)]
    C += [[Fraction(v) for v in def_tin_A[i] + def_tin_Q[i]] for i in range(n)]
    for i in range(n):
        for j in range(n):
            ok = (C[i][j] == (p if i == j else 0) and C[n + i][n + j] == int(i == j)
                  and C[i][n + j] == int(i != j) and C[n + i][j] == int(i != j))
            if not ok:
                raise InternalFault("restriction/deflation matrix lost its block shape")
    detC = Fraction(bareiss_det([[int(v) for v in row] for row in C]))
    res_rows = C[:n]
    kernel_dim = 2 * n - rank(res_rows)
    # automorphisms permute A_i, and Q_j = E/A_j along with them
    pos = {S.elements: k for k, S in enumerate(A)}
    fix_rows = []
    for alpha in _aut_generators(E, p):
        sigma = [pos[tuple(sorted(alpha[g] for g in S.elements))] for S in A]
        for block in (0, n):
            for k in range(n):
                row = [Fraction(0)] * (2 * n)
                row[block + sigma[k]] += 1
                row[block + k] -= 1
                fix_rows.append(row)
    invariant_dim = 2 * n - rank(res_rows + fix_rows)
    labels = [f"Tin_{{A_{i}}}⊗1" for i in range(n)] + [f"Tin_{{Q_{j}}}⊗1" for j in range(n)]
    formula = (-1) ** p * p * (1 - p) ** (p + 1)
    return E2Report(p, labels, C, detC, formula, kernel_dim, invariant_dim, invariant_dim)


@lru_cache(maxsize=None)
def _n_cp1(p: int) -> int:
    return e2_report(p).n_Cp1


# -- the matrix ---------------------------------------------------------------------------

def _elementary_rank2_prime(H: FiniteGroup) -> int | None:
    p = H.prime_power
    if p and H.order == p * p and not H.is_cyclic:
        return p
    return None


def bound_entry(G: FiniteGroup, pairH: SimplePair, pairK: SimplePair, _cache: dict | None = None) -> DecompEntry:
    idx = iso_class_index(G)
    H, K = idx.reps[pairH.class_index], idx.reps[pairK.class_index]
    if pairK.class_index == pairH.class_index:
        return DecompEntry(int(pairK.character == pairH.character), EXACT, "diagonal_one")
    if not _is_quotient(H, K):
        return DecompEntry(0, EXACT, "not_a_quotient")
    key = (pairH.class_index, pairH.char_index, pairK.class_index)
    if _cache is not None and key in _cache:
        chi = _cache[key]
    else:
        chi = ind_rho_nabla(G, AtomicModule(pairH.class_index, pairH.character), K)
        if _cache is not None:
            _cache[key] = chi
    return DecompEntry(multiplicity(chi, pairK.character), BOUND, "nabla_bound")


def general_row(G: FiniteGroup, i: int, V: Character, _cache: dict | None = None) -> list[DecompEntry]:
    idx, H, pairs = _row_template(G, i)
    me = next(q for q in pairs if q.class_index == i and q.character == V)
    p = _elementary_rank2_prime(H)
    row = []
    for q in pairs:
        entry = bound_entry(G, me, q, _cache)
        if entry.exact:
            pass
        elif q.class_index == 0:
            entry = burnside_multiplicity(H, V)
        elif p and _is_trivial(V) and idx.reps[q.class_index].order == p and _is_trivial(q.character):
            entry = DecompEntry(_n_cp1(p), EXACT, "e2_computation")
        row.append(entry)
    return row


def row_for(G: FiniteGroup, pair: SimplePair, _cache: dict | None = None) -> list[DecompEntry]:
    """The strongest available rule for one row."""
    H = iso_class_index(G).reps[pair.class_index]
    if pair.class_index == 0:
        return trivial_row(G)
    if H.is_cyclic:
        return cyclic_row(G, pair.class_index, pair.character)
    if H.is_simple:
        return simple_group_row(G, pair.class_index, pair.character)
    return general_row(G, pair.class_index, pair.character, _cache)


@dataclass
class DecompositionMatrix:
    group: FiniteGroup = field(repr=False)
    pairs: list[SimplePair]
    entries: list[list[DecompEntry]]
    annotations: dict[int, list[str]] = field(default_factory=dict)

    def values(self) -> list[list[int]]:
        return [[e.value for e in row] for row in self.entries]

    def row_evidence(self, r: int) -> dict:
        """Indecomposability evidence for one row (off-diagonal content)."""
        off = [e for c, e in enumerate(self.entries[r]) if c != r]
        return {"offdiag_exact_zero": all(e.value == 0 for e in off if e.exact),
                "bound_nonzero": any(e.value for e in off if not e.exact),
                "indecomposable": all(e.value == 0 for e in off)}


def pair_labels(G: FiniteGroup, pairs: list[SimplePair] | None = None) -> list[str]:
    idx = iso_class_index(G)
    pairs = simple_pairs(G) if pairs is None else pairs
    return [f"({idx.names[q.class_index]},{'triv' if q.is_trivial else f'chi{q.char_index}'})" for q in pairs]


def check_matrix(M: DecompositionMatrix) -> None:
    idx = iso_class_index(M.group)
    for r, (ph, row) in enumerate(zip(M.pairs, M.entries)):
        H = idx.reps[ph.class_index]
        for c, (pk, e) in enumerate(zip(M.pairs, row)):
            if c == r and not (e.exact and e.value == 1):
                raise InternalFault(f"diagonal entry {r} is not an exact 1")
            if c > r and e.value:
                raise InternalFault(f"entry ({r},{c}) above the diagonal is nonzero")
            if e.value and not _is_quotient(H, idx.reps[pk.class_index]):
                raise InternalFault(f"entry ({r},{c}) is supported off the quotients of H")


def n_matrix(G: FiniteGroup) -> DecompositionMatrix:
    idx = iso_class_index(G)
    pairs = simple_pairs(G)
    cache: dict = {}
    entries = [row_for(G, q, cache) for q in pairs]
    M = DecompositionMatrix(G, pairs, entries)
    for r, q in enumerate(pairs):
        H = idx.reps[q.class_index]
        if H.prime_power and not H.is_cyclic and q.is_trivial:
            note = ["p-group row with trivial V: not indecomposable (certified, not computed)"]
            if H.order >= H.prime_power ** 3:
                note.append("contains P_{E2,1} (certified, not computed)")
            M.annotations[r] = note
    check_matrix(M)
    return M


# -- readable records --------------------------------------------------------------------

@dataclass
class InducedDecomposition:
    pair: SimplePair
    label: str
    terms: list[tuple[str, DecompEntry]]
    fully_determined: bool
    evidence: dict
    zero_bounds: list[str] = field(default_factory=list)

    def render(self) -> str:
        parts = []
        for lab, e in self.terms:
            if e.exact:
                parts.append(f"P_{lab}" if e.value == 1 else f"{e.value} P_{lab}")
            else:
                parts.append(f"(<= {e.value}) P_{lab}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"pair": self.label, "terms": [{"P": lab, **e.to_json()} for lab, e in self.terms],
                "formula": self.render(), "fully_determined": self.fully_determined, "evidence": self.evidence,
                "zero_bounds": self.zero_bounds}


def decompose_induced(G: FiniteGroup, pairH: SimplePair) -> InducedDecomposition:
    pairs = simple_pairs(G)
    r = next(k for k, q in enumerate(pairs)
             if q.class_index == pairH.class_index and q.char_index == pairH.char_index)
    row = row_for(G, pairs[r])
    idx = iso_class_index(G)
    labels = [f"{{{idx.names[q.class_index]},{'triv' if q.is_trivial else f'chi{q.char_index}'}}}" for q in pairs]
    # diagonal term first, then descending pair index
    order = sorted(range(len(pairs)), key=lambda c: -c)
    terms = [(labels[c], row[c]) for c in order if row[c].value]
    off = [e for c, e in enumerate(row) if c != r]
    evidence = {"offdiag_exact_zero": all(e.value == 0 for e in off if e.exact),
                "bound_nonzero": any(e.value for e in off if not e.exact)}
    zero_bounds = [labels[c] for c in order if not row[c].exact and row[c].value == 0]
    return InducedDecomposition(pairs[r], pair_labels(G, [pairs[r]])[0], terms,
                                all(e.exact for e in row), evidence, zero_bounds)


# -- rational representations ------------------------------------------------------------

@dataclass(frozen=True)
class KrqTerm:
    class_index: int
    name: str
    artin_dim: int
    out_action_trivial: bool


def krq_decomposition(G: FiniteGroup) -> list[KrqTerm]:
    """Classes H with S_{H,1} a summand of kR_Q, i.e. the cyclic ones."""
    idx = iso_class_index(G)
    out = []
    for i, H in enumerate(idx.reps):
        dim, trivial, codef = _artin_evidence(H)
        if H.is_cyclic:
            if (dim, trivial) != (1, True):
                raise InternalFault(f"cyclic class {idx.names[i]} has Artin quotient {dim}")
            out.append(KrqTerm(i, idx.names[i], dim, trivial))
        elif dim != 0:
            raise InternalFault(f"non-cyclic class {idx.names[i]} has a nonzero Artin quotient")
    return out
