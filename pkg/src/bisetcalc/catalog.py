"""Built-in groups and group-spec parsing."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BisetCalcError, GroupSpecError
from .groups import (FiniteGroup, are_isomorphic, cyclic_group, direct_product,
                     group_from_generators)

CATALOG_HELP = "C<n>, S<n> (n<=5), A<n> (n<=5), D<2n>, Q8, E<p>^2 (p in 2,3,5,7)"


class UnknownGroup(GroupSpecError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return group_from_generators(1, [], label=f"S{n}")
    gens = [[[1, 2]]] + ([[list(range(1, n + 1))]] if n > 2 else [])
    return group_from_generators(n, gens, label=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n <= 2:
        return group_from_generators(1, [], label=f"A{n}")
    gens = [[[i, i + 1, i + 2]] for i in range(1, n - 1)]
    return group_from_generators(n, gens, label=f"A{n}")


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given (even) order: r^i s^j, index 2i+j."""
    if order < 2 or order % 2:
        raise UnknownGroup(f"D{order}: dihedral order must be even and positive")
    n = order // 2
    table = []
    for a in range(order):
        i, j = divmod(a, 2)
        row = []
        for b in range(order):
            k, l = divmod(b, 2)
            # r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
            row.append(2 * ((i + (k if j == 0 else -k)) % n) + (j + l) % 2)
        table.append(row)
    return FiniteGroup(table, label=f"D{order}")


def quaternion_group() -> FiniteGroup:
    # units +-1, +-i, +-j, +-k encoded as (sign, unit) -> 2*unit + sign
    mult = {(0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
            (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
            (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
            (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0)}
    table = []
    for a in range(8):
        ua, sa = divmod(a, 2)
        row = []
        for b in range(8):
            ub, sb = divmod(b, 2)
            s, u = mult[(ua, ub)]
            row.append(2 * u + (s + sa + sb) % 2)
        table.append(row)
    return FiniteGroup(table, label="Q8")


def elementary_abelian(p: int) -> FiniteGroup:
    """Rank-2 elementary abelian group of order p^2."""
    return direct_product(cyclic_group(p), cyclic_group(p), label=f"E{p}^2")


_PATTERNS = [
    (re.compile(r"C(\d+)"), lambda n: cyclic_group(n) if n >= 1 else None),
    (re.compile(r"S(\d+)"), lambda n: symmetric_group(n) if 1 <= n <= 5 else None),
    (re.compile(r"A(\d+)"), lambda n: alternating_group(n) if 1 <= n <= 5 else None),
    (re.compile(r"D(\d+)"), lambda n: dihedral_group(n) if n >= 2 and n % 2 == 0 else None),
    (re.compile(r"E(\d+)\^2"), lambda p: elementary_abelian(p) if p in (2, 3, 5, 7) else None),
]


@lru_cache(maxsize=None)
def catalog_group(name: str) -> FiniteGroup:
    """Resolve a case-sensitive catalog name such as ``"S4"`` or ``"E3^2"``."""
    if name == "Q8":
        return quaternion_group()
    for pat, build in _PATTERNS:
        m = pat.fullmatch(name)
        if m:
            G = build(int(m.group(1)))
            if G is not None:
                G.label = name
                return G
            break
    raise UnknownGroup(f"unknown catalog group {name!r} (known: {CATALOG_HELP})")


def group_from_json(doc: dict) -> FiniteGroup:
    try:
        degree = int(doc["degree"])
        gens = doc["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupSpecError(f"malformed group file: missing or bad field {exc}") from None
    return group_from_generators(degree, gens, label=doc.get("name"))


@dataclass(frozen=True)
class GroupSpec:
    source: str
    kind: str  # "catalog" or "file"
    resolved: FiniteGroup = field(repr=False, compare=False)


def parse_group_spec(arg: str) -> GroupSpec:
    """A catalog name, or a path to a JSON generator file."""
    path = Path(arg)
    if path.suffix == ".json" or path.is_file():
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError:
            raise GroupSpecError(f"group file not found: {arg}") from None
        except json.JSONDecodeError as exc:
            raise GroupSpecError(f"malformed JSON in {arg}: {exc}") from None
        return GroupSpec(arg, "file", group_from_json(doc))
    return GroupSpec(arg, "catalog", catalog_group(arg))


# -- naming ------------------------------------------------------------------------

def _small_candidates(n: int):
    yield f"C{n}", lambda: cyclic_group(n)
    if n == 1:
        return
    for p in (2, 3, 5, 7, 11, 13):
        if n == p * p:
            yield f"E{p}^2", lambda p=p: elementary_abelian(p)
    named = {6: [("S3", lambda: symmetric_group(3))], 8: [("Q8", quaternion_group)],
             12: [("A4", lambda: alternating_group(4))], 24: [("S4", lambda: symmetric_group(4))],
             60: [("A5", lambda: alternating_group(5))], 120: [("S5", lambda: symmetric_group(5))]}
    yield from named.get(n, [])
    if n % 2 == 0 and n >= 6:
        yield f"D{n}", lambda: dihedral_group(n)
    for a in range(2, n):
        b, r = divmod(n, a)
        if r == 0 and a <= b and b % a == 0 and a > 1 and not (a == b and a in (2, 3, 5, 7, 11, 13)):
            yield f"C{a}xC{b}", lambda a=a, b=b: direct_product(cyclic_group(a), cyclic_group(b))
    if n == 8:
        yield "C2xC2xC2", lambda: direct_product(elementary_abelian(2), cyclic_group(2))
    if n == 12:
        yield "C3:C4", lambda: group_from_generators(7, [[[1, 2, 3]], [[2, 3], [4, 5, 6, 7]]])
    if n == 20:
        yield "F20", lambda: group_from_generators(5, [[[1, 2, 3, 4, 5]], [[2, 3, 5, 4]]])
    if n == 24:
        yield "C2xA4", lambda: direct_product(cyclic_group(2), alternating_group(4))
        yield "C2xD12", lambda: direct_product(cyclic_group(2), dihedral_group(12))


@lru_cache(maxsize=None)
def _candidates(n: int) -> tuple:
    out = []
    for name, build in _small_candidates(n):
        try:
            out.append((name, build()))
        except BisetCalcError:
            continue
    return tuple(out)


def identify(G: FiniteGroup) -> str:
    """A readable name for small groups; falls back to ``[order]#fingerprint``."""
    if G.order == 1:
        return "1"
    for name, H in _candidates(G.order):
        if H.order == G.order and H.fingerprint == G.fingerprint and are_isomorphic(G, H):
            return name
    import hashlib

    tag = hashlib.sha1(repr(G.fingerprint).encode()).hexdigest()[:6]
    return f"[{G.order}]#{tag}"
