"""Command line front end.

Exit codes: 0 success, 1 invalid input, 2 internal invariant violation,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report
from .errors import (
    BudgetExceeded,
    InvalidBridgeParams,
    InvalidSeifertMatrix,
    NotAMetabolizer,
    ReplayFailure,
)
from .metabolizers import DEFAULT_BUDGET, PrimaryForm

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_BUDGET = 0, 1, 2, 3


def _load_analyze_input(args) -> object:
    if args.matrix is not None:
        return json.loads(args.matrix)
    if args.path in (None, "-"):
        return json.load(sys.stdin)
    with open(args.path) as fh:
        return json.load(fh)


def _cmd_analyze(args):
    S = report.parse_seifert(_load_analyze_input(args))
    return report.analyze_report(S)


def _cmd_double(args):
    if args.table:
        lo = args.lo if args.lo is not None else -10
        hi = args.hi if args.hi is not None else 12
        if lo > hi:
            raise ValueError(f"empty range {lo}..{hi}")
        return report.double_table(lo, hi)
    if args.a is None:
        raise ValueError("double needs --a or --table")
    return report.double_report(args.a)


def _cmd_twobridge(args):
    return report.twobridge_report(args.p, args.q)


def _cmd_metab(args):
    d = args.d if args.d is not None else 4 * args.k
    if args.eps is not None:
        eps = tuple(int(e) for e in args.eps.replace(",", " ").split())
        F = PrimaryForm(args.p, args.n, d, eps)
    else:
        F = PrimaryForm.alternating(args.p, args.n, d)
    return report.metab_report(
        F,
        verify=args.verify_structure,
        do_replay=args.replay,
        budget=args.budget,
        override=args.budget_override,
        jobs=args.jobs,
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knotorder", description="Concordance-order obstructions from Seifert data.")
    ap.add_argument("--json", action="store_true", help="emit the JSON report instead of text")
    # lets --json follow the subcommand as well
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="run every rule on a Seifert matrix")
    a.add_argument("path", nargs="?", help='JSON file {"seifert": [[...]]}, or - for stdin')
    a.add_argument("--matrix", help="inline JSON matrix or object")
    a.set_defaults(func=_cmd_analyze)

    d = sub.add_parser("double", parents=[common], help="the a-twisted double")
    d.add_argument("--a", type=int)
    d.add_argument("--table", action="store_true", help="sweep a over a range")
    d.add_argument("--from", dest="lo", type=int)
    d.add_argument("--to", dest="hi", type=int)
    d.set_defaults(func=_cmd_double)

    t = sub.add_parser("twobridge", parents=[common], help="the two-bridge knot K(p, q)")
    t.add_argument("p", type=int)
    t.add_argument("q", type=int)
    t.set_defaults(func=_cmd_twobridge)

    m = sub.add_parser("metab", parents=[common], help="enumerate metabolizers of (Z_{p^n})^d")
    m.add_argument("--p", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--k", type=int, default=1, help="d = 4k copies")
    m.add_argument("--d", type=int, help="override d directly")
    m.add_argument("--eps", help="form coefficients, e.g. '1,-1,1,-1' (default alternating)")
    m.add_argument("--verify-structure", action="store_true")
    m.add_argument("--replay", action="store_true")
    m.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    m.add_argument("--budget-override", action="store_true")
    m.add_argument("--jobs", type=int, default=1)
    m.set_defaults(func=_cmd_metab)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rep = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ReplayFailure, AssertionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InvalidSeifertMatrix, InvalidBridgeParams, NotAMetabolizer, ValueError, OSError) as exc:
        # json.JSONDecodeError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.dumps(rep) if args.json else report.render_text(rep))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
