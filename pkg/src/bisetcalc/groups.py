"""Finite groups given by explicit multiplication tables.

Elements are the integers ``0..order-1``.  Permutation groups are converted
to tables on construction; every other operation (subgroups, quotients,
isomorphisms, automorphism groups) works on the table alone.
"""

from __future__ import annotations

import hashlib
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BisetCalcError, GroupTooLarge, InvalidPermutation, NotNormalError


@dataclass
class Limits:
    """Order caps.  Mutate the module-level ``LIMITS`` to override."""

    closure: int = 5000
    lattice: int = 200
    assoc_check: int = 200


LIMITS = Limits()


class FiniteGroup:
    """A finite group as a Cayley table.

    ``mul[a][b]`` is the index of the product ``a*b``.  The table is validated
    on construction (Latin square, identity, inverses, and exhaustive
    associativity up to ``LIMITS.assoc_check``).
    """

    def __init__(self, table, label: str | None = None, check: bool = True):
        mul = np.asarray(table, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise BisetCalcError("multiplication table must be a non-empty square")
        n = mul.shape[0]
        self.mul = mul
        self.mul.setflags(write=False)
        self.order = n
        self.label = label
        self.rows: list[list[int]] = mul.tolist()
        ident = [e for e in range(n) if self.rows[e] == list(range(n))]
        if not ident:
            raise BisetCalcError("table has no identity element")
        self.identity = ident[0]
        inv = [0] * n
        for a in range(n):
            row = self.rows[a]
            try:
                inv[a] = row.index(self.identity)
            except ValueError:
                raise BisetCalcError(f"element {a} has no inverse") from None
        self.inverse = inv
        if check:
            self._validate()

    def _validate(self) -> None:
        n = self.order
        target = np.arange(n)
        if not (np.sort(self.mul, axis=1) == target).all() or not (np.sort(self.mul, axis=0) == target[:, None]).all():
            raise BisetCalcError("table is not a Latin square")
        for a in range(n):
            if self.rows[self.inverse[a]][a] != self.identity:
                raise BisetCalcError(f"inverse of {a} is only one-sided")
        if n <= LIMITS.assoc_check:
            # (ab)c == a(bc) for all triples, vectorised
            if not np.array_equal(self.mul[self.mul], self.mul[:, self.mul]):
                raise BisetCalcError("table is not associative")

    def __repr__(self) -> str:
        name = self.label or "group"
        return f"<FiniteGroup {name} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def m(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def power(self, a: int, k: int) -> int:
        k %= self.element_orders[a]
        x = self.identity
        for _ in range(k):
            x = self.rows[x][a]
        return x

    def conj(self, h: int, x: int) -> int:
        """h x h^-1"""
        return self.rows[self.rows[h][x]][self.inverse[h]]

    @cached_property
    def key(self) -> str:
        """Digest of the literal table; equal keys mean identical tables."""
        return hashlib.sha256(self.mul.astype(np.int32).tobytes()).hexdigest()[:24]

    @cached_property
    def element_orders(self) -> list[int]:
        orders = [0] * self.order
        for a in range(self.order):
            x, k = a, 1
            while x != self.identity:
                x = self.rows[x][a]
                k += 1
            orders[a] = k
        return orders

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.element_orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def is_cyclic(self) -> bool:
        return self.order in self.element_orders

    @cached_property
    def classes(self) -> "ClassIndex":
        return ClassIndex(self)

    @cached_property
    def fingerprint(self) -> tuple:
        """Isomorphism invariant used to bucket candidates before a full test."""
        return (
            self.order,
            tuple(sorted(Counter(self.element_orders).items())),
            tuple(sorted(self.classes.sizes)),
            self.is_abelian,
        )

    @cached_property
    def is_simple(self) -> bool:
        if self.order == 1:
            return False
        for cls in self.classes.members:
            if cls[0] == self.identity:
                continue
            # normal closure of a single nontrivial class
            if len(normal_closure(self, cls)) < self.order:
                return False
        return True

    @cached_property
    def prime_power(self) -> int | None:
        """The prime p if the order is a positive power of p, else None."""
        n = self.order
        if n == 1:
            return None
        p = 2
        while n % p:
            p += 1
        while n % p == 0:
            n //= p
        return p if n == 1 else None

    def closure(self, gens: Iterable[int], start: Iterable[int] = ()) -> frozenset[int]:
        gens = list(dict.fromkeys(gens))
        seen = set(start) | {self.identity}
        queue = deque(seen)
        rows = self.rows
        while queue:
            x = queue.popleft()
            r = rows[x]
            for g in gens:
                y = r[g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)


class ClassIndex:
    """Conjugacy classes, ordered by (element order, class size, min member)."""

    def __init__(self, group: FiniteGroup):
        G = group
        seen = [-1] * G.order
        raw = []
        for x in G.elements():
            if seen[x] >= 0:
                continue
            orbit = sorted({G.conj(h, x) for h in G.elements()})
            for y in orbit:
                seen[y] = 1
            raw.append(orbit)
        raw.sort(key=lambda c: (G.element_orders[c[0]], len(c), c[0]))
        self.group = G
        self.members: list[list[int]] = raw
        self.reps = [c[0] for c in raw]
        self.sizes = [len(c) for c in raw]
        self.class_of = [0] * G.order
        for i, c in enumerate(raw):
            for y in c:
                self.class_of[y] = i
        self.inverse_class = [self.class_of[G.inverse[r]] for r in self.reps]

    def __len__(self) -> int:
        return len(self.reps)

    def power_class(self, i: int, k: int) -> int:
        return self.class_of[self.group.power(self.reps[i], k)]


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def check(self) -> bool:
        S, T, im = self.source, self.target, self.image
        if im[S.identity] != T.identity:
            return False
        lhs = np.asarray(im)[S.mul]
        imarr = np.asarray(im)
        rhs = T.mul[imarr[:, None], imarr[None, :]]
        return bool(np.array_equal(lhs, rhs))

    @property
    def is_bijective(self) -> bool:
        return len(set(self.image)) == self.target.order == self.source.order

    def kernel(self) -> "Subgroup":
        return Subgroup(self.source, tuple(x for x in self.source.elements() if self.image[x] == self.target.identity))

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other"""
        return GroupHom(other.source, self.target, tuple(self.image[other.image[x]] for x in other.source.elements()))

    def inverse(self) -> "GroupHom":
        inv = [0] * self.source.order
        for x, y in enumerate(self.image):
            inv[y] = x
        return GroupHom(self.target, self.source, tuple(inv))


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False, compare=False, hash=False)
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def mask(self) -> int:
        m = 0
        for x in self.elements:
            m |= 1 << x
        return m

    def __contains__(self, x: int) -> bool:
        return (self.mask >> x) & 1 == 1

    def issubset(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def is_valid(self) -> bool:
        G = self.parent
        s = set(self.elements)
        if G.identity not in s:
            return False
        return all(G.inverse[a] in s and all(G.rows[a][b] in s for b in s) for a in s)

    def is_normal_in(self, H: "Subgroup | None" = None) -> bool:
        G = self.parent
        ambient = H.elements if H is not None else G.elements()
        s = set(self.elements)
        return all(G.conj(h, n) in s for h in ambient for n in self.elements)

    @cached_property
    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup as a standalone group plus its embedding into ``parent``."""
        elems = self.elements
        pos = {x: i for i, x in enumerate(elems)}
        rows = self.parent.rows
        table = [[pos[rows[a][b]] for b in elems] for a in elems]
        return FiniteGroup(table, check=False), elems

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={self.elements[:8]}{'...' if self.order > 8 else ''})"


# -- construction -----------------------------------------------------------

def perm_from_cycles(degree: int, cycles: Sequence) -> tuple[int, ...]:
    """1-based cycles (or a 1-based image list) to a 0-based image tuple."""
    cycles = list(cycles)
    if cycles and all(isinstance(c, int) for c in cycles):
        if len(cycles) != degree or sorted(cycles) != list(range(1, degree + 1)):
            raise InvalidPermutation(f"{cycles} is not a permutation of 1..{degree}")
        return tuple(c - 1 for c in cycles)
    img = list(range(degree))
    touched = set()
    for cyc in cycles:
        cyc = list(cyc)
        for pt in cyc:
            if not isinstance(pt, int) or not 1 <= pt <= degree:
                raise InvalidPermutation(f"point {pt!r} outside 1..{degree}")
            if pt in touched:
                raise InvalidPermutation(f"point {pt} repeated in {cycles}")
            touched.add(pt)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def group_from_generators(degree: int, generators: Sequence, label: str | None = None,
                          max_order: int | None = None) -> FiniteGroup:
    """Close permutations under composition and return the abstract table.

    Products compose left to right (``(x*y)(i) = y(x(i))``).  Elements are
    numbered breadth-first from the identity, multiplying by the generators in
    the order given.
    """
    if degree < 1:
        raise InvalidPermutation("degree must be positive")
    cap = LIMITS.closure if max_order is None else max_order
    gens = [perm_from_cycles(degree, g) if not _is_image(g, degree) else tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise InvalidPermutation(f"{g} is not a bijection")
    ident = tuple(range(degree))
    index = {ident: 0}
    perms = [ident]
    parent: list[tuple[int, int]] = [(-1, -1)]
    queue = deque([0])
    while queue:
        xi = queue.popleft()
        x = perms[xi]
        for k, g in enumerate(gens):
            y = tuple(g[x[i]] for i in range(degree))
            if y not in index:
                if len(perms) >= cap:
                    raise GroupTooLarge(f"closure exceeds order cap {cap}")
                index[y] = len(perms)
                perms.append(y)
                parent.append((xi, k))
                queue.append(index[y])
    n = len(perms)
    # right multiplication by each generator, as a permutation of indices
    right = [np.fromiter((index[tuple(g[p[i]] for i in range(degree))] for p in perms), dtype=np.int64, count=n)
             for g in gens]
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    for x in range(1, n):
        y, k = parent[x]
        table[:, x] = right[k][table[:, y]]
    G = FiniteGroup(table, label=label)
    G.permutations = perms
    return G


def _is_image(g, degree: int) -> bool:
    # already a 0-based image tuple (internal use)
    return isinstance(g, tuple) and len(g) == degree and all(isinstance(x, int) for x in g) and sorted(g) == list(range(degree))


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], label=f"C{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup, label: str | None = None) -> FiniteGroup:
    nb = B.order
    table = [[A.rows[a // nb][c // nb] * nb + B.rows[a % nb][c % nb] for c in range(A.order * nb)]
             for a in range(A.order * nb)]
    return FiniteGroup(table, label=label)


# -- subgroups ----------------------------------------------------------------

def _lattice_guard(G: FiniteGroup) -> None:
    if G.order > LIMITS.lattice:
        raise GroupTooLarge(f"order {G.order} exceeds lattice cap {LIMITS.lattice}")


def normal_closure(G: FiniteGroup, elems: Iterable[int]) -> frozenset[int]:
    elems = set(elems)
    gens = {G.conj(h, x) for h in G.elements() for x in elems}
    return G.closure(gens)


def subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups, sorted by order then element set.

    Cyclic subgroups first; then every known subgroup is extended by one
    cyclic generator outside it and closed, until nothing new appears.
    """
    _lattice_guard(G)  # before the cache, so a lowered cap still applies
    cached = getattr(G, "_subgroups", None)
    if cached is not None:
        return cached
    found: dict[frozenset[int], tuple[int, ...]] = {}
    cyclic_gens: list[int] = []
    for g in G.elements():
        c = G.closure([g])
        if c not in found:
            found[c] = (g,) if g != G.identity else ()
            cyclic_gens.append(g)
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            gens = found[H]
            for g in cyclic_gens:
                if g in H:
                    continue
                K = G.closure(gens + (g,), start=H)
                if K not in found:
                    found[K] = gens + (g,)
                    nxt.append(K)
        frontier = nxt
    result = sorted((Subgroup(G, tuple(s)) for s in found), key=lambda s: (s.order, s.elements))
    G._subgroups = result
    return result


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return [N for N in subgroups(G) if N.is_normal_in()]


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(G.elements()))


def quotient(H: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """The coset group H/N and the projection; cosets ordered by least member."""
    if N.parent is not H and N.parent.order != H.order:
        raise BisetCalcError("subgroup does not belong to this group")
    if not N.is_normal_in():
        raise NotNormalError("not a normal subgroup")
    coset_of = [-1] * H.order
    reps = []
    for x in H.elements():
        if coset_of[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for n in N.elements:
            coset_of[H.rows[x][n]] = idx
    table = [[coset_of[H.rows[a][b]] for b in reps] for a in reps]
    Q = FiniteGroup(table)
    return Q, GroupHom(H, Q, tuple(coset_of))


# -- isomorphisms ---------------------------------------------------------------

def generating_sequence(G: FiniteGroup) -> list[int]:
    """Greedy generating sequence, largest element order first."""
    order = sorted(G.elements(), key=lambda x: (-G.element_orders[x], x))
    gens: list[int] = []
    S = frozenset([G.identity])
    for x in order:
        if len(S) == G.order:
            break
        if x not in S:
            gens.append(x)
            S = G.closure(gens)
    return gens


def _word_tree(G: FiniteGroup, gens: Sequence[int]) -> list[tuple[int, int, int]]:
    """BFS spanning tree: entries (x, parent, gen index) with x = parent*gens[k]."""
    seen = {G.identity}
    tree = []
    queue = deque([G.identity])
    while queue:
        y = queue.popleft()
        for k, g in enumerate(gens):
            x = G.rows[y][g]
            if x not in seen:
                seen.add(x)
                tree.append((x, y, k))
                queue.append(x)
    return tree


def _extend(A: FiniteGroup, B: FiniteGroup, gens, tree, imgs) -> list[int] | None:
    image = [-1] * A.order
    image[A.identity] = B.identity
    Br = B.rows
    for x, y, k in tree:
        image[x] = Br[image[y]][imgs[k]]
    Ar = A.rows
    for x in A.elements():
        ix = Br[image[x]]
        ax = Ar[x]
        for k, g in enumerate(gens):
            if image[ax[g]] != ix[imgs[k]]:
                return None
    return image


def isomorphisms(A: FiniteGroup, B: FiniteGroup, first_only: bool = False) -> list[GroupHom]:
    """All isomorphisms A -> B, in a deterministic order."""
    if A.order != B.order:
        return []
    if A.order == 1:
        return [GroupHom(A, B, (B.identity,))]
    if A.fingerprint != B.fingerprint:
        return []
    gens = generating_sequence(A)
    tree = _word_tree(A, gens)
    cands = [[y for y in B.elements() if B.element_orders[y] == A.element_orders[g]] for g in gens]
    pair_orders = {(i, j): A.element_orders[A.rows[gens[i]][gens[j]]]
                   for i in range(len(gens)) for j in range(len(gens)) if i != j}
    out: list[GroupHom] = []
    imgs: list[int] = []

    def dfs(k: int) -> bool:
        if k == len(gens):
            image = _extend(A, B, gens, tree, imgs)
            if image is not None and len(set(image)) == B.order:
                out.append(GroupHom(A, B, tuple(image)))
                return first_only
            return False
        for y in cands[k]:
            ok = True
            for i in range(k):
                if (B.element_orders[B.rows[imgs[i]][y]] != pair_orders[(i, k)]
                        or B.element_orders[B.rows[y][imgs[i]]] != pair_orders[(k, i)]):
                    ok = False
                    break
            if not ok:
                continue
            imgs.append(y)
            stop = dfs(k + 1)
            imgs.pop()
            if stop:
                return True
        return False

    dfs(0)
    return out


def are_isomorphic(A: FiniteGroup, B: FiniteGroup) -> bool:
    return bool(isomorphisms(A, B, first_only=True))


def find_isomorphism(A: FiniteGroup, B: FiniteGroup) -> GroupHom | None:
    isos = isomorphisms(A, B, first_only=True)
    return isos[0] if isos else None


# -- automorphisms --------------------------------------------------------------

class OutGroup:
    """Aut(H), Inn(H) and Out(H) = Aut/Inn with a chosen section.

    Automorphisms are image tuples on H's elements.  The product in ``aut`` is
    composition ``a*b = a o b`` (apply ``b`` first).
    """

    def __init__(self, base: FiniteGroup):
        _lattice_guard(base)
        self.base = base
        autos = [h.image for h in isomorphisms(base, base)]
        ident = tuple(base.elements())
        autos.sort(key=lambda a: a != ident)  # identity first, order otherwise kept
        self.automorphisms: list[tuple[int, ...]] = autos
        self._index = {a: i for i, a in enumerate(autos)}
        arr = np.asarray(autos, dtype=np.int64)
        m = len(autos)
        gens = generating_sequence(base) or [base.identity]
        comp = arr[:, arr[:, gens]]  # [a, b, k] = a(b(g_k))
        keyed = {tuple(arr[i, gens].tolist()): i for i in range(m)}
        flat = comp.reshape(m * m, len(gens)).tolist()
        table = np.fromiter((keyed[tuple(r)] for r in flat), dtype=np.int64, count=m * m).reshape(m, m)
        self.aut = FiniteGroup(table, label=f"Aut({base.label or '?'})",
                               check=m <= LIMITS.assoc_check)
        inn = sorted({self._index[tuple(base.conj(h, x) for x in base.elements())] for h in base.elements()})
        self.inn = Subgroup(self.aut, tuple(inn))
        self.out, self.projection = quotient(self.aut, self.inn)
        reps = [-1] * self.out.order
        for a in range(m):
            c = self.projection.image[a]
            if reps[c] < 0:
                reps[c] = a
        self.section: list[tuple[int, ...]] = [autos[a] for a in reps]

    def aut_index(self, perm: Sequence[int]) -> int:
        return self._index[tuple(perm)]

    def out_index(self, perm: Sequence[int]) -> int:
        return self.projection.image[self._index[tuple(perm)]]


_OUT_BY_KEY: dict[str, OutGroup] = {}


def out_group(H: FiniteGroup) -> OutGroup:
    """Out(H); shared between groups with literally identical tables."""
    _lattice_guard(H)
    cached = getattr(H, "_out", None)
    if cached is None:
        cached = _OUT_BY_KEY.get(H.key)
        if cached is None:
            cached = _OUT_BY_KEY.setdefault(H.key, OutGroup(H))
        H._out = cached
    return cached
