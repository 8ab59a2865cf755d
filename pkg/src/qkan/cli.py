"""Command-line front end: ``qkan <command> -i workspace.json [options]``.

Exit codes: 0 holds, 1 fails, 2 invalid input, 3 budget exceeded,
4 internal error (two routes that must agree disagreed).
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .errors import BudgetExceeded, InternalError, PreconditionError, QkanError
from .kan import FixCategory, kphi
from .presheaf import default_budget, is_ccd, is_complete, is_opccd
from .qcat import QCategory, underlying_order
from .qdist import is_regular
from .quantaloid import family_report, girard_search
from .verify import DEFAULT_CHECK_BUDGET, Bounds, Verdict, check_names, mine, verify
from .workspace import UnknownName, Workspace, WorkspaceError, load

EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    return str(obj)


def resolve_category(ws: Workspace, target: str, budget: int | None) -> QCategory:
    """A declared category, or ``kphi:<dist>`` for the fixed-point category of a distributor."""
    if target.startswith("kphi:"):
        return kphi(ws.distributor(target[len("kphi:"):]), budget)
    return ws.category(target)


def _presheaf_names(K: FixCategory) -> list[dict]:
    Q, src = K.base, K.parent.source
    out = []
    for k in range(K.n):
        X = K.types[k]
        vals = K.values[k]
        out.append({
            "name": K.names[k],
            "type": Q.objects[X],
            "values": {src.names[a]: Q.hom(src.types[a], X).names[int(vals[a])] for a in range(src.n)},
        })
    return out


def _hom_table(A: QCategory) -> list[list[str]]:
    Q = A.base
    return [[Q.hom(A.types[x], A.types[y]).names[int(A.hom[x, y])] for y in range(A.n)] for x in range(A.n)]


def dot_order(A: QCategory) -> str:
    """Hasse diagram of the underlying order in DOT."""
    o = underlying_order(A)
    lines = ["digraph order {", "  rankdir=BT;"]
    for x in range(A.n):
        lines.append(f'  n{x} [label="{A.names[x]}"];')
    for x in range(A.n):
        for y in range(A.n):
            if x != y and o[x, y] and not any(z not in (x, y) and o[x, z] and o[z, y] and not o[z, x] and not o[y, z] for z in range(A.n)):
                lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------- single checks


def run_check(ws: Workspace, what: str, target: str | None, bounds: Bounds, emit_dot: bool = False) -> Verdict:
    start = time.perf_counter()
    pb = bounds.presheaf_budget
    if what == "girard":
        fam = girard_search(ws.base)
        if fam is None:
            return Verdict("girard", "fails", {"reason": "no cyclic dualizing family"}, time.perf_counter() - start)
        names = {ws.base.objects[X]: ws.base.hom(X, X).names[d] for X, d in enumerate(fam.d)}
        report = family_report(ws.base, fam)
        return Verdict("girard", "holds", {"family": names}, time.perf_counter() - start, {}, {"report": bool(report)})
    if target is None:
        raise UnknownName(f"check {what} needs a target")
    if what == "regular":
        phi = ws.distributor(target)
        r = is_regular(phi, bounds.budget)
        Q = phi.base
        if r.regular:
            bar = r.bar
            w = {"phi_bar": [[Q.hom(bar.dom.types[x], bar.cod.types[y]).names[int(bar.matrix[x, y])]
                              for y in range(bar.cod.n)] for x in range(bar.dom.n)]}
        else:
            w = r.witness
        return Verdict(f"regular {target}", "holds" if r.regular else "fails", w, time.perf_counter() - start,
                       {}, {"conditions": r.conditions})
    if what in ("ccd", "opccd", "complete"):
        A = resolve_category(ws, target, pb)
        if what == "complete":
            c = is_complete(A, pb)
            return Verdict(f"complete {target}", "holds" if c else "fails", None if c else c.evidence,
                           time.perf_counter() - start, {"objects": A.n}, {"routes": c.routes})
        r = is_ccd(A, pb) if what == "ccd" else is_opccd(A, pb)
        if r.holds:
            w = {"adjoint": {A.names[a]: r.PA.names[int(t)] for a, t in enumerate(r.witness.mapping)}}
        else:
            w = {"reason": r.reason}
        details = {"routes": r.routes}
        if emit_dot:
            details["dot"] = dot_order(A)
        return Verdict(f"{what} {target}", "holds" if r.holds else "fails", w, time.perf_counter() - start,
                       {"objects": A.n, "presheaves": r.PA.n if r.PA is not None else None}, details)
    raise UnknownName(f"unknown check {what!r}")


def run_kphi(ws: Workspace, target: str, bounds: Bounds, emit_dot: bool = False) -> Verdict:
    start = time.perf_counter()
    K = kphi(ws.distributor(target), bounds.presheaf_budget)
    w = {"members": _presheaf_names(K), "hom": _hom_table(K)}
    details = {"dot": dot_order(K)} if emit_dot else {}
    return Verdict(f"kphi {target}", "holds", w, time.perf_counter() - start, {"members": K.n}, details)


# ---------------------------------------------------------------- output


def render_text(v: Verdict) -> str:
    lines = [f"{v.check}: {v.result}  ({v.timing_s:.3f}s)"]
    if v.counts:
        lines.append("counts: " + json.dumps(v.counts, default=_jsonable))
    w = v.witness
    if isinstance(w, dict) and "members" in w and "hom" in w:
        lines.append("members:")
        for m in w["members"]:
            vals = ", ".join(f"{a}={q}" for a, q in m["values"].items())
            lines.append(f"  {m['name']} (type {m['type']}): {vals}")
        lines.append("hom:")
        for row in w["hom"]:
            lines.append("  " + "  ".join(f"{q:>5}" for q in row))
    elif w is not None:
        lines.append("witness: " + json.dumps(w, default=_jsonable, ensure_ascii=False))
    dot = v.details.get("dot")
    rest = {k: val for k, val in v.details.items() if k != "dot"}
    if rest:
        lines.append("details: " + json.dumps(rest, default=_jsonable, ensure_ascii=False))
    if dot:
        lines.append(dot)
    return "\n".join(lines)


def render(v: Verdict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(v.to_json(), default=_jsonable, ensure_ascii=False, indent=2)
    return render_text(v)


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", required=True, help="workspace JSON file")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--max-objects", type=int, default=None, help="largest category size swept")
    common.add_argument("--budget", type=int, default=None, help="candidate cap for enumerations")
    common.add_argument("--emit-dot", action="store_true", help="include the underlying order of K as DOT")

    p = argparse.ArgumentParser(prog="qkan", description="Finite quantaloid-enriched categories, Kan adjunctions and regularity.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="decide one property")
    c.add_argument("property", choices=("regular", "ccd", "opccd", "complete", "girard"))
    c.add_argument("target", nargs="?", help="distributor, category, or kphi:<distributor>")
    k = sub.add_parser("kphi", parents=[common], help="print the members and hom table of Kφ")
    k.add_argument("target")
    v = sub.add_parser("verify", parents=[common], help="check a theorem over all instances within bounds")
    v.add_argument("check_id", help="one of: " + ", ".join(check_names()))
    m = sub.add_parser("mine", parents=[common], help="search for a counterexample to an implication")
    m.add_argument("--implication", type=int, required=True, choices=range(1, 6))
    return p


def _bounds(args) -> Bounds:
    b = Bounds()
    if args.max_objects is not None:
        b = Bounds(max_objects=args.max_objects)
    if args.budget is not None:
        b.budget = args.budget
        b.presheaf_budget = args.budget
    else:
        b.budget = DEFAULT_CHECK_BUDGET
        b.presheaf_budget = default_budget()
    return b


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ws = load(args.input)
        bounds = _bounds(args)
        if args.command == "check":
            verdict = run_check(ws, args.property, args.target, bounds, args.emit_dot)
        elif args.command == "kphi":
            verdict = run_kphi(ws, args.target, bounds, args.emit_dot)
        elif args.command == "verify":
            try:
                verdict = verify(ws, args.check_id, bounds)
            except KeyError as exc:
                raise UnknownName(exc.args[0]) from None
        else:
            verdict = mine(ws, args.implication, bounds)
    except (WorkspaceError, PreconditionError) as exc:
        print(f"qkan: invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        verdict = Verdict(args.command, "budget-exceeded", None, 0.0, {}, {"budget": str(exc), "partial": True})
    except InternalError as exc:
        print(f"qkan: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except QkanError as exc:
        print(f"qkan: invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(render(verdict, args.format))
    return verdict.exit_code


if __name__ == "__main__":
    sys.exit(main())
