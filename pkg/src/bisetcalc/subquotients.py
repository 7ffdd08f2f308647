"""Subquotients H/N of a finite group and their isomorphism classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .groups import (_lattice_guard, FiniteGroup, GroupHom, Subgroup, find_isomorphism,
                     generating_sequence, normal_subgroups, quotient, subgroups)


@dataclass(frozen=True, eq=False)
class Subquotient:
    """A pair (H, N) with N normal in H <= G, and the constructed group H/N.

    ``sub`` and ``ker`` are subgroups of ``parent``; ``proj`` maps the
    standalone copy of ``sub`` (``sub.as_group``) onto ``group``.
    """

    parent: FiniteGroup = field(repr=False)
    sub: Subgroup
    ker: Subgroup
    group: FiniteGroup = field(repr=False)
    proj: GroupHom = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def key(self) -> tuple:
        return (self.sub.elements, self.ker.elements)


def _is_normal(G: FiniteGroup, N: Subgroup, gens: list[int]) -> bool:
    mask = N.mask
    for h in gens:
        for n in N.elements:
            if not (mask >> G.conj(h, n)) & 1:
                return False
    return True


def subquotients(G: FiniteGroup) -> list[Subquotient]:
    """Every pair (H, N), N normal in H <= G, ordered by (|H|, H, N)."""
    _lattice_guard(G)
    cached = getattr(G, "_subquotients", None)
    if cached is not None:
        return cached
    subs = subgroups(G)
    out = []
    for H in subs:
        Hg, emb = H.as_group
        gens = [emb[g] for g in generating_sequence(Hg)]
        pos = {x: i for i, x in enumerate(emb)}
        kers = [N for N in subs if N.order <= H.order and H.order % N.order == 0
                and N.issubset(H) and _is_normal(G, N, gens)]
        for N in sorted(kers, key=lambda s: s.elements):
            Q, proj = quotient(Hg, Subgroup(Hg, tuple(pos[x] for x in N.elements)))
            out.append(Subquotient(G, H, N, Q, proj))
    G._subquotients = out
    return out


@dataclass
class IsoClassIndex:
    """Isomorphism classes of subquotients, representatives ordered by size.

    ``chosen_iso[k]`` is a fixed isomorphism from ``sqs[k].group`` onto the
    representative of its class; downstream transports all reuse it.
    """

    group: FiniteGroup
    sqs: list[Subquotient]
    reps: list[FiniteGroup]
    members: list[int]
    chosen_iso: list[GroupHom]
    first_member: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.reps)

    def class_members(self, i: int) -> list[Subquotient]:
        return [sq for sq, c in zip(self.sqs, self.members) if c == i]

    def member_count(self, i: int) -> int:
        return sum(1 for c in self.members if c == i)

    def class_of(self, K: FiniteGroup) -> int | None:
        """Index of the class isomorphic to K, or None."""
        for i, R in enumerate(self.reps):
            if R.order == K.order and R.fingerprint == K.fingerprint and find_isomorphism(K, R) is not None:
                return i
        return None

    def iso_to_rep(self, sq: Subquotient) -> GroupHom:
        return self.chosen_iso[self._pos[sq.key]]

    def class_index(self, sq: Subquotient) -> int:
        return self.members[self._pos[sq.key]]

    @cached_property
    def _pos(self) -> dict:
        return {sq.key: k for k, sq in enumerate(self.sqs)}

    @cached_property
    def names(self) -> list[str]:
        from .catalog import identify

        return [identify(R) for R in self.reps]


def iso_class_index(G: FiniteGroup) -> IsoClassIndex:
    _lattice_guard(G)
    cached = getattr(G, "_iso_index", None)
    if cached is not None:
        return cached
    sqs = subquotients(G)
    buckets: dict[tuple, list[int]] = {}
    raw_reps: list[int] = []  # positions in sqs of class representatives
    raw_class = [0] * len(sqs)
    isos: list[GroupHom | None] = [None] * len(sqs)
    for k, sq in enumerate(sqs):
        fp = sq.group.fingerprint
        for c in buckets.get(fp, []):
            rep = sqs[raw_reps[c]].group
            iso = find_isomorphism(sq.group, rep)
            if iso is not None:
                raw_class[k] = c
                isos[k] = iso
                break
        else:
            c = len(raw_reps)
            raw_reps.append(k)
            buckets.setdefault(fp, []).append(c)
            raw_class[k] = c
            isos[k] = GroupHom(sq.group, sq.group, tuple(sq.group.elements()))
    perm = sorted(range(len(raw_reps)), key=lambda c: (sqs[raw_reps[c]].order, sqs[raw_reps[c]].group.fingerprint, raw_reps[c]))
    renumber = {c: i for i, c in enumerate(perm)}
    reps = [sqs[raw_reps[c]].group for c in perm]
    index = IsoClassIndex(G, sqs, reps, [renumber[c] for c in raw_class], isos,
                          [raw_reps[c] for c in perm])
    G._iso_index = index
    return index


def quotients_iso_to(R: FiniteGroup, K: FiniteGroup) -> list[Subgroup]:
    """Normal subgroups N of R with R/N isomorphic to K."""
    if R.order % K.order:
        return []
    out = []
    for N in normal_subgroups(R):
        if N.order * K.order != R.order:
            continue
        Q, _ = quotient(R, N)
        if find_isomorphism(Q, K) is not None:
            out.append(N)
    return out
