"""Command-line front end.

Exit status: 0 affirmative result, 1 negative result (inadmissible, no
clash, not found, exhausted), 2 usage or I/O error, 3 search limit reached.

All coordinates are 0-indexed.  Supports are comma-separated coordinate
lists (``0,1,3,4``), types are strings over {1,2} (``1212``), colours are
three such characters (``121``), and ``-`` names stdin or stdout.
"""
from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from . import __version__
from .bounds import bound_report
from .colouring import (
    format_colour,
    induced_colouring,
    parse_colour,
    reconstruct_monochromatic,
)
from .construct import construct_I
from .core import FormatError, VectorFamily, find_clash, format_family, is_I_set, parse_family, project
from .search import (
    ModelError,
    SearchConfig,
    Status,
    decode_model,
    exists_I,
    export_cnf,
    f_max,
    parse_model,
    read_varmap,
)
from .typed import (
    BudgetExceeded,
    format_type,
    is_typed_clash,
    monotype_I_exists,
    parse_type,
)

OK, NEGATIVE, ERROR, LIMIT = 0, 1, 2, 3

_CLAIM = re.compile(r"I\(\s*(\d+)\s*,\s*(\d+)\s*\)")


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _claimed_w(text: str, m: int) -> int | None:
    for line in text.splitlines():
        if line.startswith("#"):
            hit = _CLAIM.search(line)
            if hit and int(hit.group(1)) == m:
                return int(hit.group(2))
    return None


def _parse_support(s: str, m: int | None = None) -> tuple[int, ...]:
    try:
        sup = tuple(int(x) for x in s.split(",") if x != "")
    except ValueError:
        raise UsageError(f"bad support {s!r}: expected comma-separated integers") from None
    if m is not None and any(not 0 <= i < m for i in sup):
        raise UsageError(f"support {s} is not inside [0,{m})")
    return sup


def _emit_family(family: VectorFamily, out: str | None, comments: Sequence[str]) -> None:
    _write_text(out, format_family(family, comments))


def _config(args) -> SearchConfig:
    return SearchConfig(
        node_limit=args.nodes,
        time_limit=args.time,
        threads=args.threads,
        star_symmetry=not args.no_symmetry,
        permutation_symmetry=not args.no_symmetry,
        seed_order=args.order,
    )


# -- subcommands ----------------------------------------------------------------

def cmd_verify(args) -> int:
    text = _read_text(args.file)
    family = parse_family(text)
    m = family.m
    w = args.w if args.w is not None else _claimed_w(text, m)
    status = OK
    if w is not None:
        if is_I_set(family, m, w):
            print(f"I({m},{w}): yes")
        else:
            print(f"I({m},{w}): no")
            status = NEGATIVE
    clash = find_clash(family)
    if clash is None:
        print(f"ADMISSIBLE ({len(family)} vectors, m={m})")
    else:
        i = ",".join(map(str, clash.indices))
        print(f"NOT ADMISSIBLE: {clash} (members {i})")
        status = NEGATIVE
    return status


def cmd_construct(args) -> int:
    family = construct_I(args.m, args.w)
    _emit_family(family, args.output, [f"I({args.m},{args.w}) admissible set (closed form)"])
    return OK


def cmd_search(args) -> int:
    res = exists_I(args.m, args.w, _config(args))
    summary = f"{res.status.value} nodes={res.nodes} elapsed={res.elapsed:.3f}s"
    if res.status is Status.FOUND:
        _emit_family(res.witness, args.output,
                     [f"I({args.m},{args.w}) admissible set (search)", summary])
        print(summary, file=sys.stderr)
        return OK
    print(f"I({args.m},{args.w}): {summary}")
    return NEGATIVE if res.status is Status.EXHAUSTED else LIMIT


def cmd_fmax(args) -> int:
    res = f_max(args.m, args.w, _config(args))
    report = bound_report(res.value, args.m, args.w)
    comments = [
        f"f({args.m},{args.w}) {'=' if res.exact else '>='} {res.value}",
        f"exact={'yes' if res.exact else 'no'} nodes={res.nodes} elapsed={res.elapsed:.3f}s",
        f"capset base {report.base} (F_3^{report.dimension} size {report.count})",
    ]
    _emit_family(res.witness, args.output, comments)
    return OK if res.exact else LIMIT


def cmd_typed_clash(args) -> int:
    t = parse_type(args.type)
    sups = [_parse_support(s, args.m) for s in (args.s1, args.s2, args.s3)]
    if is_typed_clash(*sups, t, args.m):
        print("CLASH")
        return OK
    print("NO CLASH")
    return NEGATIVE


def cmd_monotype(args) -> int:
    t = parse_type(args.type)
    try:
        res = monotype_I_exists(args.m, args.w, t, node_limit=args.nodes, time_limit=args.time)
    except BudgetExceeded as e:
        print(f"LIMIT: {e}")
        return LIMIT
    if res.exists:
        _emit_family(res.witness, args.output,
                     [f"I({args.m},{args.w}) admissible set, every vector of type {format_type(t)}"])
        return OK
    print(f"NONE: no admissible I({args.m},{args.w}) set of type {format_type(t)}")
    return NEGATIVE


def cmd_colour(args) -> int:
    family = parse_family(_read_text(args.file))
    try:
        colouring = induced_colouring(family)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print("# triple (0-indexed) -> colour (v(i,j)[k], v(i,k)[j], v(j,k)[i])")
    for (i, j, k), c in sorted(colouring.items()):
        print(f"{i},{j},{k} {format_colour(c)}")
    return OK


def cmd_reconstruct(args) -> int:
    colour = parse_colour(args.colour)
    family = reconstruct_monochromatic(args.m, colour)
    clash = find_clash(family)
    note = "admissible" if clash is None else f"NOT admissible, {clash}"
    _emit_family(family, args.output,
                 [f"I({args.m},{args.m - 2}) set with constant colour {format_colour(colour)}", note])
    if clash is not None:
        print(f"NOT ADMISSIBLE: {clash}", file=sys.stderr)
        return NEGATIVE
    return OK


def cmd_project(args) -> int:
    text = _read_text(args.file)
    family = parse_family(text)
    try:
        out = project(family, args.coord, args.branch)
    except (IndexError, ValueError) as e:
        raise UsageError(str(e)) from None
    comments = [f"projection of m={family.m} family: coordinate {args.coord} {args.branch}"]
    w = _claimed_w(text, family.m)
    if w is not None:
        nw = w if args.branch == "zero" else w - 1
        if 0 <= nw <= out.m and is_I_set(out, out.m, nw):
            comments.append(f"I({out.m},{nw})")
    _emit_family(out, args.output, comments)
    return OK


def cmd_export_cnf(args) -> int:
    if args.output in (None, "-"):
        varmap = export_cnf(args.m, args.w, sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            varmap = export_cnf(args.m, args.w, fh)
    print(f"wrote {varmap.nvars} variables", file=sys.stderr)
    return OK


def cmd_decode(args) -> int:
    varmap = read_varmap(_read_text(args.cnf))
    lits = parse_model(_read_text(args.model))
    family = decode_model(lits, varmap, verify=False)
    m, w = varmap.m, varmap.w
    clash = find_clash(family)
    ok = is_I_set(family, m, w) and clash is None
    note = f"I({m},{w}) admissible set (decoded)" if ok else f"decoded family is NOT admissible: {clash}"
    _emit_family(family, args.output, [note])
    if not ok:
        print(note, file=sys.stderr)
        return NEGATIVE
    return OK


def cmd_bound(args) -> int:
    report = bound_report(args.f, args.m, args.w, args.precision)
    sys.stdout.write(report.key_values() if args.format == "kv" else report.text())
    return OK


# -- parser -------------------------------------------------------------------------

def _add_limits(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time", type=float, default=None, help="time limit in seconds")
    p.add_argument("--nodes", type=int, default=None, help="node limit")


def _add_search_opts(p: argparse.ArgumentParser) -> None:
    _add_limits(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-symmetry", action="store_true",
                   help="disable star and coordinate-permutation symmetry breaking")
    p.add_argument("--order", choices=("colex", "lex"), default="colex",
                   help="support order used to break ties (default colex)")
    p.add_argument("-o", "--output", default="-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="admissible",
        description="Check, build and search for admissible sets in {0,1,2}^m. "
                    "Coordinates are 0-indexed throughout.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check admissibility (and the I(m,w) property)")
    p.add_argument("file")
    p.add_argument("--w", type=int, default=None,
                   help="check I(m,w); defaults to an 'I(m,w)' claim in the comments")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="closed-form I(m,w) for w in {1,2,3,m-1,m}")
    p.add_argument("m", type=int)
    p.add_argument("w", type=int)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exact search for an admissible I(m,w) set")
    p.add_argument("m", type=int)
    p.add_argument("w", type=int)
    _add_search_opts(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("fmax", help="largest admissible family of weight-w vectors")
    p.add_argument("m", type=int)
    p.add_argument("w", type=int)
    _add_search_opts(p)
    p.set_defaults(func=cmd_fmax)

    p = sub.add_parser("typed-clash", help="decide whether three supports form a type-t clash")
    p.add_argument("type")
    p.add_argument("s1")
    p.add_argument("s2")
    p.add_argument("s3")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_typed_clash)

    p = sub.add_parser("monotype", help="admissible I(m,w) with every vector of type t?")
    p.add_argument("m", type=int)
    p.add_argument("w", type=int)
    p.add_argument("type")
    _add_limits(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_monotype)

    p = sub.add_parser("colour", help="triple colouring induced by an I(m,m-2) set")
    p.add_argument("file")
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser(
        "reconstruct",
        help="I(m,m-2) set with constant triple colour (0-indexed: the pair "
             "vector v(1,4) of 1-indexed notation is v(0,3) here)",
    )
    p.add_argument("m", type=int)
    p.add_argument("colour")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("project", help="restrict to vectors zero/non-zero at a coordinate, then delete it")
    p.add_argument("file")
    p.add_argument("coord", type=int)
    p.add_argument("branch", choices=("zero", "nonzero"))
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("export-cnf", help="DIMACS CNF whose models are the admissible I(m,w) sets")
    p.add_argument("m", type=int)
    p.add_argument("w", type=int)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_export_cnf)

    p = sub.add_parser("decode", help="turn a SAT model of an exported CNF into a family")
    p.add_argument("cnf", help="the exported CNF (its comments carry the variable map)")
    p.add_argument("model", help="solver output with 'v' lines, or plain literals")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("bound", help="cap-set size and growth base from f vectors")
    p.add_argument("f", type=int)
    p.add_argument("m", type=int)
    p.add_argument("w", type=int)
    p.add_argument("--precision", type=int, default=64, help="bits (>= 64)")
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else ERROR
    try:
        return args.func(args)
    except (UsageError, FormatError, ModelError, ValueError, OSError) as e:
        print(f"admissible {args.command}: error: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
