"""Command line front end.

Exit codes: 0 success, 1 the tool ran but a property or construction
failed (the report is still printed), 2 bad invocation or unreadable input.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import io
from .amalgamation import STRATEGIES, AmalgamationError, PreconditionError, amalgamate
from .factorization import ml_factorize
from .families import FAMILIES, SUITES, run_suite
from .graph import GraphError, enumerate_rooted_trees, enumerate_trees
from .limits import BuildConfig, SequenceError, approximant_report, build_sequence
from .morphisms import PROPERTIES, MorphismError, SearchBudgetExceeded, check, enumerate_epis

BUDGET_ENV = "TREEFRAISSE_MAX_VERTICES"


class UsageError(Exception):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV, "10")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def _emit(doc, out):
    text = io.dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands


def cmd_check(args) -> int:
    f = io.load_map(args.map)
    reports = [check(f, p) for p in args.property]
    doc = {"reports": [io.report_to_dict(r) for r in reports]}
    _emit(doc, args.out)
    return 0 if all(r.verdict for r in reports) else 1


def cmd_amalgamate(args) -> int:
    f, g = io.load_map(args.f), io.load_map(args.g)
    kw = {"max_verts": args.max_verts or default_budget(), "constraints": args.constraint}
    if args.strategy in ("confluent", "unfolding"):
        kw["ends"] = args.ends
    try:
        res = amalgamate(f, g, args.strategy, **kw)
    except (AmalgamationError, PreconditionError) as exc:
        _emit({"strategy": args.strategy, "ok": False, "error": str(exc)}, args.out)
        return 1
    if res is None:
        _emit({"strategy": args.strategy, "ok": False, "error": "search found no amalgamation"}, args.out)
        return 1
    _emit(io.result_to_dict(res), args.out)
    return 0 if res.certificate.commutes and (res.ok or args.strategy == "pullback") else 1


def cmd_factorize(args) -> int:
    f = io.load_map(args.map)
    _emit(io.factorization_to_dict(ml_factorize(f)), args.out)
    return 0


def cmd_enumerate(args) -> int:
    if args.trees is not None:
        if args.rooted:
            found = [io.graph_to_dict(t, r) for t, r in enumerate_rooted_trees(args.trees)]
        else:
            found = [io.graph_to_dict(t) for t in enumerate_trees(args.trees)]
        _emit({"n": args.trees, "count": len(found), "trees": found}, args.out)
        return 0
    if not (args.dom and args.cod):
        raise UsageError("enumerate needs --trees N or both --dom and --cod")
    dom, rd = io.load_graph(args.dom)
    cod, rc = io.load_graph(args.cod)
    roots = (rd, rc) if rd is not None and rc is not None else None
    maps = enumerate_epis(dom, cod, args.constraint, roots, args.max_vertices or default_budget(), args.limit)
    _emit({"count": len(maps), "assignments": [list(m.assign) for m in maps]}, args.out)
    return 0


def cmd_build_limit(args) -> int:
    cfg = BuildConfig(depth=args.depth, cap=args.cap, on_failure="log")
    if args.vertex_budget:
        cfg.vertex_budget = args.vertex_budget
    seq = build_sequence(args.family, args.depth, args.cap, cfg)
    _emit(io.sequence_to_dict(seq), args.out)
    failed = [e for e in seq.log if e.get("status") == "failed"]
    return 0 if not failed and not seq.check_bonds() else 1


def cmd_report(args) -> int:
    seq = io.load_sequence(args.seq)
    stage = args.stage or seq.depth
    _emit(approximant_report(seq, stage, split=args.split).to_dict(), args.out)
    return 0


def cmd_verify(args) -> int:
    doc = run_suite(args.family, args.suite, args.cap)
    _emit(doc, args.out)
    return 0 if doc["ok"] else 1


def cmd_export(args) -> int:
    if args.format != "dot":
        raise UsageError(f"unsupported format {args.format!r}")
    if args.seq:
        seq = io.load_sequence(args.seq)
        stage = args.stage or seq.depth
        g, root = seq.stage(stage), seq.roots[stage - 1]
    elif args.graph:
        g, root = io.load_graph(args.graph)
    elif args.result:
        res = io.result_from_dict(io.read(args.result))
        g, root = res.d, res.root
    else:
        raise UsageError("export needs --seq, --graph or --result")
    text = io.export_dot(g, root, styling=not args.plain)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treefraisse", description="Epimorphisms and amalgamations of finite trees.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check properties of a map")
    c.add_argument("--map", required=True)
    c.add_argument("--property", action="append", required=True, choices=sorted(PROPERTIES))
    c.set_defaults(fn=cmd_check)

    a = sub.add_parser("amalgamate", help="amalgamate two maps with a common codomain")
    a.add_argument("--f", required=True)
    a.add_argument("--g", required=True)
    a.add_argument("--strategy", required=True, choices=sorted(STRATEGIES))
    a.add_argument("--max-verts", type=int, help=f"search size bound (default ${BUDGET_ENV} or 10)")
    a.add_argument("--constraint", action="append", default=[], choices=sorted(PROPERTIES))
    a.add_argument("--ends", action="store_true", help="confluent strategies: also preserve ends")
    a.set_defaults(fn=cmd_amalgamate)

    fz = sub.add_parser("factorize", help="monotone-light factorization")
    fz.add_argument("--map", required=True)
    fz.set_defaults(fn=cmd_factorize)

    e = sub.add_parser("enumerate", help="list trees or epimorphisms")
    e.add_argument("--trees", type=int, metavar="N")
    e.add_argument("--rooted", action="store_true")
    e.add_argument("--dom")
    e.add_argument("--cod")
    e.add_argument("--constraint", action="append", default=[], choices=sorted(PROPERTIES))
    e.add_argument("--limit", type=int)
    e.add_argument("--max-vertices", type=int)
    e.set_defaults(fn=cmd_enumerate)

    b = sub.add_parser("build-limit", help="build a fundamental sequence")
    b.add_argument("--family", required=True, choices=sorted(FAMILIES))
    b.add_argument("--depth", type=int, default=5)
    b.add_argument("--cap", type=int, default=3)
    b.add_argument("--vertex-budget", type=int)
    b.set_defaults(fn=cmd_build_limit)

    r = sub.add_parser("report", help="summarize one stage of a sequence")
    r.add_argument("--seq", required=True)
    r.add_argument("--stage", type=int)
    r.add_argument("--split", action="store_true", help="split ramification before counting")
    r.set_defaults(fn=cmd_report)

    v = sub.add_parser("verify", help="run a family suite")
    v.add_argument("--family", required=True, choices=sorted(FAMILIES))
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--cap", type=int, default=4)
    v.set_defaults(fn=cmd_verify)

    x = sub.add_parser("export", help="export a graph as DOT")
    x.add_argument("--seq")
    x.add_argument("--stage", type=int)
    x.add_argument("--graph")
    x.add_argument("--result")
    x.add_argument("--format", default="dot")
    x.add_argument("--plain", action="store_true", help="no styling")
    x.set_defaults(fn=cmd_export)

    for sp in (c, a, fz, e, b, r, v):
        sp.add_argument("--out", help="write JSON here instead of stdout")
    x.add_argument("--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.fn(args)
    except (UsageError, OSError, ValueError, GraphError, MorphismError, SequenceError, SearchBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
