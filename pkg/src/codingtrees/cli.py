"""``codingtrees`` command line.

Trees are given inline as expressions or as ``.json`` files; points as
``.json`` files or inline literals such as ``(0, 1/2, top)``.  Exit status
is 0 for success or a true predicate, 1 for a false predicate or a failed
audit, 2 for usage and data errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from codingtrees.checks import SUITES
from codingtrees.coding_tree import (
    CodingTree,
    canonicalize,
    from_json,
    lower_isomorphic,
    to_dot,
    to_json,
    tree_iso,
    validate,
)
from codingtrees.errors import CodingTreeError
from codingtrees.order_expr import compile_text, parse, to_text
from codingtrees.points import (
    Point,
    check_point,
    compare,
    parse_point_literal,
    point_from_json,
    point_to_json,
    random_point_rng,
)
from codingtrees.transitivity import audit_witness, initial_segment_witness

OK, FALSE, ERROR = 0, 1, 2


def load_tree(arg: str) -> CodingTree:
    if arg.endswith(".json"):
        return from_json(Path(arg).read_bytes())
    return compile_text(arg)


def load_point(t: CodingTree, arg: str) -> Point:
    if arg.endswith(".json") or Path(arg).is_file():
        p = point_from_json(json.loads(Path(arg).read_text()))
    else:
        p = parse_point_literal(t, arg)
    check_point(t, p)
    return p


def _write_or_print(data: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(data if data.endswith("\n") else data + "\n")
    else:
        Path(path).write_text(data)


def _tree_summary(t: CodingTree) -> str:
    rows = []
    for lvl in range(t.height, -1, -1):
        labels = " ".join(str(t.label(v)) for v in t.by_level[lvl])
        rows.append(f"level {lvl}: {labels}")
    return "\n".join([f"vertices: {len(t)}"] + rows)


def cmd_parse(args) -> int:
    print(to_text(parse(args.expr)))
    return OK


def cmd_compile(args) -> int:
    t = compile_text(args.expr)
    if args.json is None and args.dot is None:
        print(to_json(t).decode())
        return OK
    if args.json is not None:
        Path(args.json).write_bytes(to_json(t))
    if args.dot is not None:
        Path(args.dot).write_text(to_dot(t))
    print(_tree_summary(t))
    return OK


def cmd_validate(args) -> int:
    report = validate(load_tree(args.path))
    print("valid" if report.ok else str(report))
    return OK if report.ok else FALSE


def cmd_canon(args) -> int:
    c = canonicalize(load_tree(args.path))
    data = to_json(c).decode()
    if args.json is None:
        print(data)
    else:
        Path(args.json).write_text(data)
    return OK


def cmd_iso(args) -> int:
    same = tree_iso(load_tree(args.a), load_tree(args.b)) is not None
    print("true" if same else "false")
    return OK if same else FALSE


def cmd_loweriso(args) -> int:
    same = lower_isomorphic(load_tree(args.a), load_tree(args.b))
    print("true" if same else "false")
    return OK if same else FALSE


def cmd_sample(args) -> int:
    import random

    t = load_tree(args.expr)
    rng = random.Random(args.seed)
    for _ in range(args.count):
        print(json.dumps(point_to_json(random_point_rng(t, rng, args.magnitude))))
    return OK


def cmd_compare(args) -> int:
    t = load_tree(args.expr)
    print(compare(t, load_point(t, args.p), load_point(t, args.q)))
    return OK


def cmd_witness(args) -> int:
    t = load_tree(args.expr)
    w = initial_segment_witness(t, load_point(t, args.f), load_point(t, args.g))
    report = audit_witness(w, args.probes, args.seed)
    print(f"checked: {report.checked}")
    print(f"violations: {len(report.violations)}")
    for v in report.violations[:20]:
        print(f"  {v}")
    if args.trace is not None:
        Path(args.trace).write_text(w.trace_json())
    return OK if report.ok else FALSE


def cmd_check(args) -> int:
    t = load_tree(args.expr)
    res = SUITES[args.suite](t, args.seed)
    print(res)
    for f in res.failures:
        print(f"  {f}")
    return OK if res.ok else FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codingtrees", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo an expression in canonical form")
    p.add_argument("expr")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("compile", help="compile an expression to a coding tree")
    p.add_argument("expr")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--dot", metavar="PATH")
    p.set_defaults(run=cmd_compile)

    p = sub.add_parser("validate", help="check a tree file against V1-V7")
    p.add_argument("path")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("canon", help="canonicalize a tree file")
    p.add_argument("path")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(run=cmd_canon)

    for name, fn, what in (("iso", cmd_iso, "isomorphic"),
                           ("loweriso", cmd_loweriso, "lower isomorphic")):
        p = sub.add_parser(name, help=f"exit 0 if the trees are {what}, else 1")
        p.add_argument("a")
        p.add_argument("b")
        p.set_defaults(run=fn)

    p = sub.add_parser("sample", help="emit seeded random points as JSON lines")
    p.add_argument("expr")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--magnitude", type=int, default=10)
    p.set_defaults(run=cmd_sample)

    p = sub.add_parser("compare", help="compare two points")
    p.add_argument("expr")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("witness", help="audit an initial-segment isomorphism")
    p.add_argument("expr")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--probes", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", metavar="PATH")
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("expr")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_check)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        return args.run(args)
    except (CodingTreeError, OSError, ValueError) as exc:
        msg = " ".join(str(exc).split())
        print(f"codingtrees {args.command}: {type(exc).__name__}: {msg}", file=sys.stderr)
        return ERROR


def main() -> None:
    sys.exit(run())
