"""The acceptance checks, shared by ``bisetcalc selftest`` and the test suite."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import lcm
from typing import Callable

from .bisets import AtomicModule, build_X, ind_rho_nabla, tensor_character
from .catalog import catalog_group, elementary_abelian
from . import characters as _characters
from .characters import (artin_quotient_dim, character_table, codef_krq_dim, simple_pairs,
                         verify_table)
from .decomposition import (burnside_multiplicity, cyclic_row, e2_report, krq_decomposition, n_matrix,
                            pair_labels, row_for)
from .groups import FiniteGroup, cyclic_group, out_group
from .oracles import character_mod, numeric_character_table, relation_quotient_character, tables_agree
from .subquotients import iso_class_index, quotients_iso_to


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, fn: Callable[[], tuple[bool, str]], limit: float | None = None) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported with its reason
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok, detail = False, f"{detail}; exceeded {limit}s"
    return CheckResult(number, name, ok, detail, dt)


def check_e2_determinant() -> CheckResult:
    def run():
        got = {}
        for p in (2, 3, 5):
            t0 = time.perf_counter()
            r = e2_report(p)
            if time.perf_counter() - t0 > 1.0:
                return False, f"p={p} took longer than 1s"
            got[p] = r.detC
            if r.detC != (-1) ** p * p * (1 - p) ** (p + 1):
                return False, f"p={p}: detC={r.detC}"
        return True, "detC = " + ", ".join(f"{v} (p={p})" for p, v in got.items())
    return _timed(1, "E2 determinant", run)


def check_e2_kernel() -> CheckResult:
    def run():
        for p in (2, 3, 5):
            r = e2_report(p)
            if (r.kernel_dim, r.invariant_dim, r.n_Cp1) != (p + 1, 1, 1):
                return False, f"p={p}: kernel {r.kernel_dim}, invariant {r.invariant_dim}"
            if out_group(elementary_abelian(p)).out.order != (p * p - 1) * (p * p - p):
                return False, f"p={p}: |Out(E2)| is wrong"
        return True, "kernel_dim = p+1 and invariant_dim = 1 for p = 2, 3, 5"
    return _timed(2, "E2 kernel and invariants", run, limit=5.0)


def check_triangularity() -> CheckResult:
    def run():
        for name in ("C6", "S3", "D8", "Q8", "A4", "S4"):
            M = n_matrix(catalog_group(name))
            n = len(M.pairs)
            for r in range(n):
                if not (M.entries[r][r].exact and M.entries[r][r].value == 1):
                    return False, f"{name}: diagonal entry {r}"
                if any(M.entries[r][c].value for c in range(r + 1, n)):
                    return False, f"{name}: row {r} has entries above the diagonal"
        return True, "C6, S3, D8, Q8, A4, S4 lower triangular with exact unit diagonal"
    return _timed(3, "Triangularity", run, limit=60.0)


def check_cyclic_burnside() -> CheckResult:
    def run():
        G = catalog_group("C12")
        idx = iso_class_index(G)
        count = 0
        for i, C in enumerate(idx.reps):
            for V in character_table(out_group(C).out):
                first = cyclic_row(G, i, V)[0].value
                burn = burnside_multiplicity(C, V).value
                trivial = all(v == 1 for v in V.values)
                if not (first == burn == int(trivial)):
                    return False, f"class {idx.names[i]}: row gives {first}, lemma gives {burn}"
                count += 1
        return True, f"{count} (C, V) pairs agree"
    return _timed(4, "Cyclic rows vs Burnside lemma", run, limit=10.0)


def _support(G: FiniteGroup, pair) -> dict[str, int]:
    labels = pair_labels(G)
    row = row_for(G, pair)
    if not all(e.exact for e in row):
        raise AssertionError("row is not exact")
    return {labels[c]: e.value for c, e in enumerate(row) if e.value}


def check_simple_rows() -> CheckResult:
    def run():
        S5 = catalog_group("S5")
        idx = iso_class_index(S5)
        a5 = idx.names.index("A5")
        rows = [q for q in simple_pairs(S5) if q.class_index == a5]
        if len(rows) != 2:
            return False, f"Out(A5) has {len(rows)} irreducibles"
        for q in rows:
            lab = f"(A5,{'triv' if q.is_trivial else f'chi{q.char_index}'})"
            if _support(S5, q) != {lab: 1}:
                return False, f"row {lab} is {_support(S5, q)}"
            if not q.is_trivial:
                chi = ind_rho_nabla(S5, AtomicModule(a5, q.character), idx.reps[0])
                if not chi.is_zero():
                    return False, "nabla evaluation at 1 is nonzero for nontrivial V"
        C5 = catalog_group("C5")
        q = next(q for q in simple_pairs(C5) if q.class_index == 1 and q.is_trivial)
        if _support(C5, q) != {"(C5,triv)": 1, "(1,triv)": 1}:
            return False, f"C5 row is {_support(C5, q)}"
        return True, "A5 rows in S5 are diagonal; C5 row is P_{C5,triv} + P_{1,triv}"
    return _timed(5, "Simple-group rows", run, limit=120.0)


def check_krq() -> CheckResult:
    def run():
        G = catalog_group("S4")
        idx = iso_class_index(G)
        terms = krq_decomposition(G)
        names = sorted(t.name for t in terms)
        if names != sorted(["1", "C2", "C3", "C4"]):
            return False, f"cyclic classes {names}"
        for i, H in enumerate(idx.reps):
            dim, trivial = artin_quotient_dim(H)
            want = (1, True) if H.is_cyclic else (0,)
            if (dim, trivial)[: len(want)] != want:
                return False, f"{idx.names[i]}: Artin quotient {dim}, trivial={trivial}"
        return True, "kR_Q over S4 = S_{1} + S_{C2} + S_{C3} + S_{C4}"
    return _timed(6, "kR_Q decomposition", run, limit=30.0)


def check_codef_def() -> CheckResult:
    def run():
        n = 0
        for name in ("S4", "D8"):
            idx = iso_class_index(catalog_group(name))
            for i, H in enumerate(idx.reps):
                a, c = artin_quotient_dim(H)[0], codef_krq_dim(H)
                if a != c:
                    return False, f"{name}/{idx.names[i]}: Def {a} vs Codef {c}"
                n += 1
        return True, f"{n} classes agree"
    return _timed(7, "Codef/Def agreement", run)


def tensor_instances() -> list[tuple]:
    """All (K, R, V) over class representatives with |X(K,R)| * deg V <= 64."""
    pool = []
    for G in (catalog_group("S4"), elementary_abelian(2), elementary_abelian(3)):
        idx = iso_class_index(G)
        for K in idx.reps:
            for R in idx.reps:
                X = build_X(K, R)
                if not X.points:
                    continue
                for V in character_table(out_group(R).out):
                    if len(X) * V.degree <= 64:
                        pool.append((K, R, V))
    return pool


def check_tensor_oracle(samples: int = 40, seed: int = 20240) -> CheckResult:
    def run():
        pool = tensor_instances()
        picked = random.Random(seed).sample(pool, min(samples, len(pool)))
        if len(picked) < 25:
            return False, f"only {len(picked)} instances available"
        for K, R, V in picked:
            X = build_X(K, R)
            chi = tensor_character(X, V)
            L = lcm(out_group(R).out.exponent, out_group(K).out.exponent)
            for floor in (10 ** 6, 10 ** 7):
                vals, q, z = relation_quotient_character(X, V, q_floor=floor)
                if character_mod(chi, q, z, L) != vals:
                    return False, f"mismatch on |K|={K.order}, |R|={R.order}"
        return True, f"{len(picked)} sampled instances agree (pool {len(pool)})"
    return _timed(8, "Tensor-character oracle", run, limit=30.0)


def check_xsets() -> CheckResult:
    def run():
        idx = iso_class_index(catalog_group("S4"))
        for R in idx.reps:
            if len(build_X(idx.reps[0], R)) != 1:
                return False, "|X(1,H)| != 1"
        for K in idx.reps:
            for R in idx.reps:
                X = build_X(K, R)
                if bool(X.points) != bool(quotients_iso_to(R, K)):
                    return False, "emptiness disagrees with the quotient test"
        for p in (2, 3):
            if len(build_X(cyclic_group(p), elementary_abelian(p))) != (p + 1) * (p - 1):
                return False, f"|X(C{p}, E{p}^2)| is wrong"
        return True, "|X(1,H)| = 1, |X(Cp,E2)| = (p+1)(p-1), emptiness exact"
    return _timed(9, "X-set counts", run)


def encountered_groups() -> list[FiniteGroup]:
    """Every group whose table the checks above rely on."""
    groups: dict[str, FiniteGroup] = {}
    names = ("C5", "C6", "C12", "S3", "D8", "Q8", "A4", "S4", "S5")
    for G in [catalog_group(n) for n in names] + [elementary_abelian(p) for p in (2, 3, 5)]:
        for H in iso_class_index(G).reps:
            groups.setdefault(H.key, H)
            O = out_group(H).out
            groups.setdefault(O.key, O)
    for table in list(_characters.CACHE._mem.values()):
        if table:
            groups.setdefault(table[0].group.key, table[0].group)
    return sorted(groups.values(), key=lambda g: (g.order, g.key))


def check_tables() -> CheckResult:
    def run():
        groups = encountered_groups()
        small = 0
        for G in groups:
            table = character_table(G)
            verify_table(G, table)
            if G.order <= 24:
                small += 1
                if not tables_agree(table, numeric_character_table(G)):
                    return False, f"table of a group of order {G.order} disagrees with the oracle"
        return True, f"{len(groups)} tables orthogonal; {small} of order <= 24 match the oracle"
    return _timed(10, "Character-table sanity", run)


CHECKS = [check_e2_determinant, check_e2_kernel, check_triangularity, check_cyclic_burnside,
          check_simple_rows, check_krq, check_codef_def, check_tensor_oracle, check_xsets, check_tables]


def run_all(echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    out = []
    for check in CHECKS:
        res = check()
        if echo:
            echo(res.line())
        out.append(res)
    return out
