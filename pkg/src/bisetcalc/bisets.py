"""The (Out(K), Out(R))-biset X(K, R) and the induced evaluation it governs.

A point of X(K, R) is a surjection f: R -> K (it factors through R/N with
N = ker f) taken up to post-composition with inner automorphisms of K.
Pre-composition with the conjugations of R needs no separate treatment:
f o c_r = c_{f(r)} o f, so it is already absorbed by the inner action on K.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .characters import Character, character_table, multiplicity
from .cyclotomic import Cyclotomic
from .errors import BisetCalcError
from .groups import FiniteGroup, GroupHom, Subgroup, isomorphisms, out_group, quotient
from .subquotients import Subquotient, iso_class_index, quotients_iso_to


@dataclass(frozen=True)
class XPoint:
    """Canonical representative: the least image tuple in its Inn(K)-orbit."""

    kernel: Subgroup
    image: tuple[int, ...]


@dataclass
class BisetX:
    K: FiniteGroup = field(repr=False)
    R: FiniteGroup = field(repr=False)
    points: list[XPoint]
    left_action: list[list[int]]   # [u][x] for u in Out(K)
    right_action: list[list[int]]  # [x][w] for w in Out(R)

    def __len__(self) -> int:
        return len(self.points)

    def hom(self, x: int) -> GroupHom:
        return GroupHom(self.R, self.K, self.points[x].image)

    def fixed_count(self, u: int, w: int) -> int:
        """#{x : u.x.w = x}"""
        left = self.left_action[u]
        return sum(1 for x in range(len(self.points)) if left[self.right_action[x][w]] == x)

    @cached_property
    def orbits(self) -> list[list[int]]:
        """Orbits of the combined Out(K) x Out(R) action."""
        seen = [False] * len(self.points)
        out = []
        for s in range(len(self.points)):
            if seen[s]:
                continue
            orb, stack = [], [s]
            seen[s] = True
            while stack:
                x = stack.pop()
                orb.append(x)
                nbrs = [row[x] for row in self.left_action] + list(self.right_action[x])
                for y in nbrs:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            out.append(sorted(orb))
        return out


def _inner_autos(K: FiniteGroup) -> list[tuple[int, ...]]:
    return sorted({tuple(K.conj(k, x) for x in K.elements()) for k in K.elements()})


_X_CACHE: dict[tuple[str, str], BisetX] = {}


def build_X(K: FiniteGroup, R: FiniteGroup) -> BisetX:
    cache_key = (K.key, R.key)
    hit = _X_CACHE.get(cache_key)
    if hit is not None:
        return hit
    inner = _inner_autos(K)

    def canon(f: tuple[int, ...]) -> tuple[int, ...]:
        return min(tuple(c[y] for y in f) for c in inner)

    points: list[XPoint] = []
    where: dict[tuple[int, ...], int] = {}
    for N in quotients_iso_to(R, K):
        Q, proj = quotient(R, N)
        for iso in isomorphisms(Q, K):
            f = canon(tuple(iso.image[proj.image[x]] for x in R.elements()))
            if f not in where:
                where[f] = len(points)
                points.append(XPoint(N, f))
    outK, outR = out_group(K), out_group(R)
    left = [[where[canon(tuple(gamma[y] for y in pt.image))] for pt in points] for gamma in outK.section]
    right = [[where[canon(tuple(pt.image[alpha[x]] for x in R.elements()))] for alpha in outR.section]
             for pt in points]
    X = BisetX(K, R, points, left, right)
    _X_CACHE[cache_key] = X
    return X


def tensor_character(X: BisetX, V: Character) -> Character:
    """Character of kX (x)_{kOut(R)} V as an Out(K)-module.

    chi(u) = (1/|Out(R)|) sum_w #{x : u.x.w = x} * chi_V(w^-1)
    """
    OK, OR = out_group(X.K).out, out_group(X.R).out
    if V.group.key != OR.key:
        raise BisetCalcError("V must be a character of Out(R)")
    cls_R = OR.classes
    conj_vals = [v.conjugate() for v in V.values]
    e = OR.exponent
    values = []
    for u in OK.classes.reps:
        acc = Cyclotomic.rational(e, 0)
        for w in OR.elements():
            n = X.fixed_count(u, w)
            if n:
                acc = acc + conj_vals[cls_R.class_of[w]] * n
        values.append(acc / OR.order)
    return Character(OK, values)


@dataclass(frozen=True)
class AtomicModule:
    """The module concentrated on the class ``class_index`` with value V."""

    class_index: int
    V: Character

    def check(self) -> None:
        for chi in character_table(self.V.group):
            if multiplicity(self.V, chi) < 0:
                raise BisetCalcError("V is not a genuine character")


def transported_character(R: FiniteGroup, iso: GroupHom, V: Character) -> Character:
    """V(R): the character V of Out(H) pulled back to Out(R) along iso: R -> H."""
    H = iso.target
    outR, outH = out_group(R), out_group(H)
    inv = iso.inverse().image
    fwd = iso.image
    vals = []
    for w in outR.out.classes.reps:
        alpha = outR.section[w]
        moved = tuple(fwd[alpha[inv[h]]] for h in H.elements())
        vals.append(V(outH.out_index(moved)))
    return Character(outR.out, vals)


def ind_rho_nabla(G: FiniteGroup, D: AtomicModule, K: FiniteGroup,
                  transport: Callable[[Subquotient], GroupHom] | None = None) -> Character:
    """Sum over subquotients R of G isomorphic to H of kX(K,R) (x) V(R).

    ``transport`` overrides the isomorphism R -> H used to move V onto R.
    """
    idx = iso_class_index(G)
    if idx.class_of(K) is None:
        raise BisetCalcError("K is not isomorphic to a subquotient of G")
    H = idx.reps[D.class_index]
    if D.V.group.key != out_group(H).out.key:
        raise BisetCalcError("V must be a character of Out(H)")
    OK = out_group(K).out
    total = Character(OK, [0] * len(OK.classes))
    if H.order % K.order:
        return total
    memo: dict = {}
    for k, sq in enumerate(idx.sqs):
        if idx.members[k] != D.class_index:
            continue
        iso = transport(sq) if transport else idx.chosen_iso[k]
        R = sq.group
        X = build_X(K, R)
        if not X.points:
            continue
        VR = transported_character(R, iso, D.V)
        mkey = (R.key, VR.values)
        if mkey not in memo:
            memo[mkey] = tensor_character(X, VR)
        total = total + memo[mkey]
    return total
