"""Exact ordinary character theory.

Character tables are computed with the modular class-sum eigenvector method:
simultaneous eigenvectors of the class multiplication matrices over a prime
field F_p (p = 1 mod exponent) give the central characters, and each value is
lifted to Q(zeta_e) through its eigenvalue multiplicities.  Every table is
checked for exact orthogonality before it is returned.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path
from typing import Sequence

from .cyclotomic import Cyclotomic, phi
from .errors import BisetCalcError, InternalFault
from .groups import ClassIndex, FiniteGroup, Subgroup, out_group, subgroups
from .linalg import nullspace_mod, rank


def conjugacy_classes(G: FiniteGroup) -> ClassIndex:
    return G.classes


class Character:
    """A class function with values in Q(zeta_e), e the group exponent."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values: Sequence):
        e = group.exponent
        self.group = group
        self.values = tuple(v.in_field(e) if isinstance(v, Cyclotomic) else Cyclotomic.rational(e, v) for v in values)
        if len(self.values) != len(group.classes):
            raise BisetCalcError("one value per conjugacy class expected")

    @property
    def degree(self) -> int:
        return int(self.values[0].to_fraction())

    def __call__(self, x: int) -> Cyclotomic:
        return self.values[self.group.classes.class_of[x]]

    def _check(self, other: "Character") -> None:
        if other.group is not self.group and other.group.key != self.group.key:
            raise BisetCalcError("characters live on different groups")

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, Character):
            self._check(other)
            return Character(self.group, [a * b for a, b in zip(self.values, other.values)])
        return Character(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Character) and other.group.key == self.group.key and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def conjugate(self) -> "Character":
        return Character(self.group, [v.conjugate() for v in self.values])

    def galois(self, a: int) -> "Character":
        """chi^a(g) = chi(g^a) for a coprime to the exponent."""
        cls = self.group.classes
        return Character(self.group, [self.values[cls.power_class(k, a)] for k in range(len(cls))])

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.values)

    def __repr__(self) -> str:
        return f"Character({list(self.values)})"


def inner_product(chi: Character, psi: Character) -> Cyclotomic:
    """(1/|G|) sum_g chi(g) conj(psi(g))"""
    chi._check(psi)
    G = chi.group
    acc = Cyclotomic.rational(G.exponent, 0)
    for size, a, b in zip(G.classes.sizes, chi.values, psi.values):
        if a and b:
            acc = acc + a * b.conjugate() * size
    return acc / G.order


def multiplicity(chi: Character, psi: Character) -> int:
    """<chi, psi> as an integer; raises if it is not one."""
    v = inner_product(chi, psi)
    q = v.to_fraction() if v.is_rational() else None
    if q is None or q.denominator != 1:
        raise InternalFault(f"inner product {v} is not an integer")
    return q.numerator


def trivial_character(G: FiniteGroup) -> Character:
    return Character(G, [1] * len(G.classes))


def regular_character(G: FiniteGroup) -> Character:
    return Character(G, [G.order] + [0] * (len(G.classes) - 1))


def permutation_character(G: FiniteGroup, fixed_points) -> Character:
    """Character of a permutation action given ``fixed_points(g)``."""
    return Character(G, [fixed_points(r) for r in G.classes.reps])


# -- character tables ------------------------------------------------------------

def _class_constants(G: FiniteGroup) -> list[list[list[int]]]:
    """a[j][i][k] = #{x in C_i : x^-1 z_k in C_j}, z_k the rep of C_k."""
    cls = G.classes
    r = len(cls)
    a = [[[0] * r for _ in range(r)] for _ in range(r)]
    co = cls.class_of
    inv = G.inverse
    rows = G.rows
    for k, z in enumerate(cls.reps):
        for x in G.elements():
            a[co[rows[inv[x]][z]]][co[x]][k] += 1
    return a


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _choose_prime(G: FiniteGroup) -> int:
    e = G.exponent
    bound = 2 * isqrt(G.order) * G.order + 1
    p = (bound // e + 1) * e + 1
    while not _is_prime(p):
        p += e
    return p


def _primitive_root(p: int) -> int:
    n = p - 1
    factors = []
    m, f = n, 2
    while f * f <= m:
        if m % f == 0:
            factors.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, n // q, p) != 1 for q in factors):
            return g
    raise InternalFault("no primitive root")


def _charpoly_mod(M: list[list[int]], p: int) -> list[int]:
    """Faddeev-LeVerrier; coefficients of det(xI - M), lowest degree first."""
    n = len(M)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = [[0] * n for _ in range(n)]
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    c = 1
    for k in range(1, n + 1):
        # Mk = M (M_{k-1} + c_{n-k+1} I)
        prev = [[(Mk[i][j] + c * ident[i][j]) % p for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][t] * prev[t][j] for t in range(n)) % p for j in range(n)] for i in range(n)]
        tr = sum(Mk[i][i] for i in range(n)) % p
        c = (-tr * pow(k, -1, p)) % p
        coeffs[n - k] = c
    return coeffs


def _roots_mod(poly: list[int], p: int) -> list[int]:
    roots = []
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


def _mat_vec_cols(M, B, p):
    """M @ B for B given as list of column vectors."""
    n = len(M)
    return [[sum(M[i][t] * col[t] for t in range(n)) % p for i in range(n)] for col in B]


def _central_characters(G: FiniteGroup, p: int) -> list[list[int]]:
    cls = G.classes
    r = len(cls)
    a = _class_constants(G)
    spaces = [[[int(i == j) for i in range(r)] for j in range(r)]]  # column bases
    for j in range(1, r):
        if all(len(S) == 1 for S in spaces):
            break
        M = [[a[j][i][k] % p for k in range(r)] for i in range(r)]
        roots = _roots_mod(_charpoly_mod(M, p), p)
        new_spaces = []
        for S in spaces:
            if len(S) == 1:
                new_spaces.append(S)
                continue
            MS = _mat_vec_cols(M, S, p)
            found = 0
            for lam in roots:
                # (M - lam) S c = 0, as a system in c
                cols = [[(x - lam * y) % p for x, y in zip(ms, s)] for ms, s in zip(MS, S)]
                system = [[cols[c][i] for c in range(len(S))] for i in range(r)]
                kern = nullspace_mod(system, len(S), p)
                if kern:
                    vecs = [[sum(cv[t] * S[t][i] for t in range(len(S))) % p for i in range(r)] for cv in kern]
                    new_spaces.append(vecs)
                    found += len(vecs)
            if found != len(S):
                raise InternalFault("class algebra did not split over the chosen prime")
        spaces = new_spaces
    if any(len(S) != 1 for S in spaces) or len(spaces) != r:
        raise InternalFault("class sums failed to separate the characters")
    out = []
    for (v,) in spaces:
        inv0 = pow(v[0], -1, p)
        out.append([x * inv0 % p for x in v])
    return out


def _dixon_table(G: FiniteGroup) -> list[Character]:
    cls = G.classes
    r = len(cls)
    e = G.exponent
    p = _choose_prime(G)
    z = pow(_primitive_root(p), (p - 1) // e, p)
    chars = []
    for omega in _central_characters(G, p):
        s = sum(omega[k] * omega[cls.inverse_class[k]] * pow(cls.sizes[k], -1, p) for k in range(r)) % p
        d2 = G.order * pow(s, -1, p) % p
        d = next((d for d in range(1, isqrt(G.order) + 1) if d * d % p == d2), None)
        if d is None:
            raise InternalFault("no admissible character degree")
        modvals = [omega[k] * d * pow(cls.sizes[k], -1, p) % p for k in range(r)]
        values = []
        for k in range(r):
            o = G.element_orders[cls.reps[k]]
            zo = pow(z, e // o, p)
            pw = [modvals[cls.power_class(k, t)] for t in range(o)]
            weights = {}
            inv_o = pow(o, -1, p)
            for l in range(o):
                m = sum(pw[t] * pow(zo, (-l * t) % o, p) for t in range(o)) * inv_o % p
                if m > d:
                    raise InternalFault("eigenvalue multiplicity out of range")
                if m:
                    weights[l * (e // o)] = m
            values.append(Cyclotomic.from_exponents(e, weights))
        chars.append(Character(G, values))
    return chars


def _sort_key(chi: Character):
    triv = all(v == 1 for v in chi.values)
    return (chi.degree, not triv, tuple(tuple(-c for c in v.c) for v in chi.values))


def verify_table(G: FiniteGroup, table: list[Character]) -> None:
    """Exact row/column orthogonality and the degree-sum identity."""
    cls = G.classes
    r = len(cls)
    if len(table) != r:
        raise InternalFault(f"{len(table)} characters for {r} classes")
    if sum(chi.degree ** 2 for chi in table) != G.order:
        raise InternalFault("sum of squared degrees differs from the group order")
    conj = [[v.conjugate() for v in chi.values] for chi in table]
    for i in range(r):
        for j in range(i, r):
            acc = Cyclotomic.rational(G.exponent, 0)
            for k in range(r):
                if table[i].values[k] and conj[j][k]:
                    acc = acc + table[i].values[k] * conj[j][k] * cls.sizes[k]
            if acc != (G.order if i == j else 0):
                raise InternalFault(f"row orthogonality fails for characters {i}, {j}")
    for k in range(r):
        for l in range(k, r):
            acc = Cyclotomic.rational(G.exponent, 0)
            for i in range(r):
                acc = acc + table[i].values[k] * conj[i][l]
            expect = Fraction(G.order, cls.sizes[k]) if k == l else 0
            if acc != expect:
                raise InternalFault(f"column orthogonality fails for classes {k}, {l}")


class TableCache:
    """Write-once store of character tables keyed by the literal group table.

    With ``directory`` set, tables also persist as one JSON file per key.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory else None
        self._mem: dict[str, list[Character]] = {}

    def get(self, G: FiniteGroup) -> list[Character] | None:
        hit = self._mem.get(G.key)
        if hit is not None:
            return hit
        if self.directory is not None:
            path = self.directory / f"{G.key}.json"
            if path.is_file():
                table = table_from_json(G, json.loads(path.read_text()))
                self._mem[G.key] = table
                return table
        return None

    def put(self, G: FiniteGroup, table: list[Character]) -> None:
        self._mem.setdefault(G.key, table)
        if self.directory is not None:
            path = self.directory / f"{G.key}.json"
            if not path.exists():
                self.directory.mkdir(parents=True, exist_ok=True)
                tmp = path.with_suffix(f".tmp{os.getpid()}")
                tmp.write_text(json.dumps(table_to_json(G, table)))
                os.replace(tmp, path)


CACHE = TableCache()


def table_to_json(G: FiniteGroup, table: list[Character]) -> dict:
    cls = G.classes
    return {
        "key": G.key,
        "order": G.order,
        "conductor": G.exponent,
        "classes": [{"rep": r, "size": s, "element_order": G.element_orders[r]} for r, s in zip(cls.reps, cls.sizes)],
        "characters": [[[str(c) for c in v.c] for v in chi.values] for chi in table],
    }


def table_from_json(G: FiniteGroup, doc: dict) -> list[Character]:
    if doc.get("key") != G.key or doc.get("conductor") != G.exponent:
        raise BisetCalcError("cached table does not match this group")
    e = G.exponent
    return [Character(G, [Cyclotomic(e, [Fraction(c) for c in v]) for v in row]) for row in doc["characters"]]


def character_table(G: FiniteGroup) -> list[Character]:
    """All irreducible characters, ordered by degree (trivial first)."""
    hit = CACHE.get(G)
    if hit is not None:
        return hit
    table = sorted(_dixon_table(G), key=_sort_key)
    verify_table(G, table)
    CACHE.put(G, table)
    return table


# -- simple pairs -------------------------------------------------------------------

@dataclass(frozen=True)
class SimplePair:
    """(H_i, V): class index of H and an irreducible character of Out(H)."""

    class_index: int
    char_index: int
    character: Character

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.character.values)


def simple_pairs(G: FiniteGroup) -> list[SimplePair]:
    from .subquotients import iso_class_index

    idx = iso_class_index(G)
    pairs = []
    for i, H in enumerate(idx.reps):
        for j, chi in enumerate(character_table(out_group(H).out)):
            pairs.append(SimplePair(i, j, chi))
    return pairs


# -- rational characters, induction, Artin --------------------------------------------

def rational_irreducibles(H: FiniteGroup) -> list[Character]:
    """Galois-orbit sums of the irreducible characters."""
    e = H.exponent
    units = [a for a in range(1, e + 1) if gcd(a, e) == 1]
    seen: set = set()
    out = []
    for chi in character_table(H):
        if chi.values in seen:
            continue
        orbit = {chi.galois(a).values: chi.galois(a) for a in units}
        seen.update(orbit)
        total = None
        for psi in orbit.values():
            total = psi if total is None else total + psi
        if not total.is_rational():
            raise InternalFault("Galois-orbit sum is not rational")
        out.append(total)
    return out


def restrict(psi: Character, L: Subgroup) -> Character:
    Lg, emb = L.as_group
    return Character(Lg, [psi(emb[r]) for r in Lg.classes.reps])


def induce_character(chi: Character, H: FiniteGroup, L: Subgroup) -> Character:
    """Ind_L^H chi, with chi a character of ``L.as_group``."""
    if L.parent is not H and L.parent.key != H.key:
        raise BisetCalcError("L is not a subgroup of H")
    Lg, emb = L.as_group
    if chi.group is not Lg and chi.group.key != Lg.key:
        raise BisetCalcError("character does not live on L")
    pos = {x: i for i, x in enumerate(emb)}
    vals = []
    e = H.exponent
    for g in H.classes.reps:
        acc = Cyclotomic.rational(e, 0)
        for x in H.elements():
            y = H.conj(x, g)
            if y in pos:
                acc = acc + chi(pos[y])
        vals.append(acc / L.order)
    return Character(H, vals)


def _coords(phi_: Character, basis: list[Character]) -> list[Fraction]:
    out = []
    for psi in basis:
        num = inner_product(phi_, psi).to_fraction()
        den = inner_product(psi, psi).to_fraction()
        out.append(num / den)
    return out


def artin_quotient_dim(H: FiniteGroup) -> tuple[int, bool]:
    """Dimension of R_Q(H) / (sum of images of Ind from proper subgroups).

    Also reports whether Out(H), acting by transport of structure, fixes the
    quotient pointwise.
    """
    basis = rational_irreducibles(H)
    rows = []
    for L in subgroups(H):
        if L.order == H.order:
            continue
        Lg, _ = L.as_group
        for rho in rational_irreducibles(Lg):
            rows.append(_coords(induce_character(rho, H, L), basis))
    img_rank = rank(rows) if rows else 0
    dim = len(basis) - img_rank
    trivial = True
    if dim:
        lookup = {psi.values: i for i, psi in enumerate(basis)}
        for alpha in out_group(H).section:
            for i, psi in enumerate(basis):
                moved = Character(H, [psi(alpha[r]) for r in H.classes.reps])
                j = lookup[moved.values]
                if j == i:
                    continue
                diff = [Fraction(0)] * len(basis)
                diff[j] += 1
                diff[i] -= 1
                if rank(rows + [diff]) != img_rank:
                    trivial = False
    return dim, trivial


def codef_krq_dim(H: FiniteGroup) -> int:
    """Dimension of the rational virtual characters vanishing on every proper subgroup."""
    basis = rational_irreducibles(H)
    hit: set[int] = set()
    for L in subgroups(H):
        if L.order < H.order:
            hit.update(H.classes.class_of[x] for x in L.elements)
    rows = [[psi.values[k].to_fraction() for psi in basis] for k in sorted(hit)]
    return len(basis) - (rank(rows) if rows else 0)
