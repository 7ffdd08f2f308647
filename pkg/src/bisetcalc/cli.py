"""Command-line front end: ``bisetcalc <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import characters
from .bisets import build_X
from .catalog import CATALOG_HELP, catalog_group, parse_group_spec
from .characters import TableCache, character_table, simple_pairs
from .decomposition import (decompose_induced, e2_report, krq_decomposition, n_matrix,
                            pair_labels)
from .errors import BisetCalcError, GroupSpecError, InternalFault
from .groups import LIMITS, FiniteGroup, out_group
from .subquotients import iso_class_index

DEFAULT_CACHE = "./.bisetcalc-cache"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cyclo_text(v) -> str:
    if v.is_rational():
        return frac(v.to_fraction())
    return f"[{', '.join(frac(c) for c in v.c)}]_{v.e}"


def _emit(args, payload: dict, text: str) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) if args.json else text


def _group(args) -> FiniteGroup:
    try:
        return parse_group_spec(args.group).resolved
    except GroupSpecError as exc:
        raise UsageError(f"bisetcalc: error: {exc}") from None


def _resolve_class(G: FiniteGroup, token: str) -> int:
    """A class of Sq(G) by displayed name, index, or catalog name."""
    idx = iso_class_index(G)
    if token in idx.names:
        return idx.names.index(token)
    if token.isdigit() and int(token) < len(idx):
        return int(token)
    try:
        K = catalog_group(token)
    except BisetCalcError:
        raise UsageError(f"unknown subquotient class {token!r}; known: {', '.join(idx.names)}") from None
    c = idx.class_of(K)
    if c is None:
        raise UsageError(f"{token} is not a subquotient of the group")
    return c


# -- commands -----------------------------------------------------------------------

def cmd_sq(args) -> str:
    G = _group(args)
    idx = iso_class_index(G)
    rows = [{"order": R.order, "name": idx.names[i], "member_count": idx.member_count(i)}
            for i, R in enumerate(idx.reps)]
    lines = [f"{len(idx.sqs)} subquotients of {G.label or args.group} (order {G.order}) in {len(idx)} classes",
             f"{'i':>3}  {'order':>5}  {'name':<12} members"]
    lines += [f"{i:>3}  {r['order']:>5}  {r['name']:<12} {r['member_count']}" for i, r in enumerate(rows)]
    return _emit(args, {"classes": rows}, "\n".join(lines))


def cmd_chartable(args) -> str:
    G = _group(args)
    table = character_table(G)
    cls = G.classes
    payload = {"order": G.order, "conductor": G.exponent,
               "classes": [{"rep": r, "size": s, "element_order": G.element_orders[r]}
                           for r, s in zip(cls.reps, cls.sizes)],
               "characters": [[[frac(c) for c in v.c] for v in chi.values] for chi in table]}
    lines = [f"character table of {G.label or args.group} (order {G.order}); values over Q(z_{G.exponent})",
             "class sizes:    " + " ".join(str(s) for s in cls.sizes),
             "element orders: " + " ".join(str(G.element_orders[r]) for r in cls.reps)]
    for j, chi in enumerate(table):
        lines.append(f"chi{j}: " + "  ".join(cyclo_text(v) for v in chi.values))
    return _emit(args, payload, "\n".join(lines))


def cmd_xset(args) -> str:
    G = _group(args)
    idx = iso_class_index(G)
    k, r = _resolve_class(G, args.K), _resolve_class(G, args.R)
    X = build_X(idx.reps[k], idx.reps[r])
    payload = {"K": idx.names[k], "R": idx.names[r], "size": len(X),
               "out_K_order": out_group(X.K).out.order, "out_R_order": out_group(X.R).out.order,
               "orbits": X.orbits,
               "points": [{"kernel": list(pt.kernel.elements), "image": list(pt.image)} for pt in X.points],
               "left_action": X.left_action, "right_action": X.right_action}
    lines = [f"|X({idx.names[k]},{idx.names[r]})| = {len(X)}",
             f"|Out(K)| = {payload['out_K_order']}, |Out(R)| = {payload['out_R_order']}",
             f"orbits under Out(K) x Out(R): {len(X.orbits)} {X.orbits}",
             "left action (row u in Out(K)):"]
    lines += [f"  u{u}: {row}" for u, row in enumerate(X.left_action)]
    lines.append("right action (row x, column w in Out(R)):")
    lines += [f"  x{x}: {row}" for x, row in enumerate(X.right_action)]
    return _emit(args, payload, "\n".join(lines))


def cmd_ngmatrix(args) -> str:
    G = _group(args)
    M = n_matrix(G)
    labels = pair_labels(G, M.pairs)
    payload = {"pairs": labels, "entries": [[e.to_json() for e in row] for row in M.entries],
               "annotations": {labels[r]: notes for r, notes in M.annotations.items()}}
    width = max(len(s) for s in labels)
    lines = [f"N_G for {G.label or args.group}: {len(labels)} pairs (E = exact, B = upper bound)"]
    for r, row in enumerate(M.entries):
        cells = " ".join(f"{e.value}{'E' if e.exact else 'B'}" for e in row)
        lines.append(f"{labels[r]:<{width}}  {cells}")
    for r, notes in M.annotations.items():
        for note in notes:
            lines.append(f"note {labels[r]}: {note}")
    return _emit(args, payload, "\n".join(lines))


def cmd_induce(args) -> str:
    G = _group(args)
    i = _resolve_class(G, args.H)
    pairs = [q for q in simple_pairs(G) if q.class_index == i]
    if not 0 <= args.V < len(pairs):
        raise UsageError(f"--V must be in 0..{len(pairs) - 1} (irreducibles of Out(H))")
    rec = decompose_induced(G, pairs[args.V])
    status = "fully determined"
    if not rec.fully_determined:
        status = "bounded"
        if rec.zero_bounds:
            status += "; entries with bound 0: " + ", ".join(f"P_{lab}" for lab in rec.zero_bounds)
    text = f"Ind S_{rec.label} = {rec.render()}  [{status}]"
    return _emit(args, rec.to_json(), text)


def cmd_e2(args) -> str:
    rep = e2_report(args.p)
    n = len(rep.C)
    lines = [f"E2 = C{args.p} x C{args.p}; basis " + ", ".join(rep.basis_labels), "C ="]
    lines += ["  " + " ".join(f"{frac(x):>3}" for x in row) for row in rep.C]
    lines += [f"detC = {frac(rep.detC)}  (closed form (-1)^p p (1-p)^(p+1) = {frac(rep.detC_formula)}, "
              f"{'match' if rep.detC == rep.detC_formula else 'MISMATCH'})",
              f"kernel_dim = {rep.kernel_dim} (of {n})",
              f"invariant_dim = {rep.invariant_dim}",
              f"n_Cp1 = {rep.n_Cp1}"]
    return _emit(args, rep.to_json(), "\n".join(lines))


def cmd_krq(args) -> str:
    G = _group(args)
    terms = krq_decomposition(G)
    payload = {"summands": [{"class_index": t.class_index, "name": t.name, "artin_dim": t.artin_dim,
                             "out_action_trivial": t.out_action_trivial} for t in terms]}
    text = "kR_Q = " + " + ".join(f"S_{{{t.name},1}}" for t in terms)
    return _emit(args, payload, text)


def cmd_selftest(args) -> str:
    from .acceptance import run_all

    results = run_all(None if args.json else (lambda s: print(s, flush=True)))
    args._failed = not all(r.passed for r in results)
    payload = {"checks": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
                          for r in results], "passed": not args._failed}
    summary = f"{sum(r.passed for r in results)}/{len(results)} acceptance checks passed"
    return _emit(args, payload, summary)


COMMANDS = {"sq": cmd_sq, "chartable": cmd_chartable, "xset": cmd_xset, "ngmatrix": cmd_ngmatrix,
            "induce": cmd_induce, "e2": cmd_e2, "krq": cmd_krq, "selftest": cmd_selftest}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cache-dir", help="character-table cache (overrides BISETCALC_CACHE)")
    common.add_argument("--max-order", type=int, help="order cap for lattice and automorphism work")
    group_help = f"catalog name ({CATALOG_HELP}) or a JSON generator file"

    p = _Parser(prog="bisetcalc", description="Exact biset-functor decompositions for small finite groups.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sp = sub.add_parser("sq", parents=[common], help="subquotient classes")
    sp.add_argument("group", help=group_help)
    sp = sub.add_parser("chartable", parents=[common], help="exact character table")
    sp.add_argument("group", help=group_help)
    sp = sub.add_parser("xset", parents=[common], help="the biset X(K,R)")
    sp.add_argument("group", help=group_help)
    sp.add_argument("--K", required=True, help="class name or index")
    sp.add_argument("--R", required=True, help="class name or index")
    sp = sub.add_parser("ngmatrix", parents=[common], help="multiplicity matrix N_G")
    sp.add_argument("group", help=group_help)
    sp = sub.add_parser("induce", parents=[common], help="decompose one induced simple functor")
    sp.add_argument("group", help=group_help)
    sp.add_argument("--H", required=True, help="class name or index")
    sp.add_argument("--V", required=True, type=int, help="index of an irreducible character of Out(H)")
    sp = sub.add_parser("e2", parents=[common], help="the C_p x C_p restriction/deflation computation")
    sp.add_argument("--p", required=True, type=int)
    sp = sub.add_parser("krq", parents=[common], help="decomposition of the rational representation functor")
    sp.add_argument("group", help=group_help)
    sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    return p


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Returns (exit status, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
    except UsageError as exc:
        return 2, str(exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0), ""
    cache_dir = args.cache_dir or os.environ.get("BISETCALC_CACHE") or DEFAULT_CACHE
    characters.CACHE = TableCache(cache_dir)
    if args.max_order:
        LIMITS.lattice = args.max_order
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        return 2, str(exc)
    except (BisetCalcError, InternalFault) as exc:
        return 1, f"bisetcalc: error: {exc}"
    return (1 if getattr(args, "_failed", False) else 0), out


def main(argv: list[str] | None = None) -> int:
    status, out = run(argv)
    if out:
        print(out, file=sys.stderr if status == 2 else sys.stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
