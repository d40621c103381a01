"""Command-line front end.

Exit status: 0 on success or a passing certificate, 1 on infeasible
parameters or a failing certificate, 2 on usage errors.  Output is
deterministic given the arguments and seed; numbers are always plain
decimal.
"""

from __future__ import annotations

import argparse
import sys

from chaindesign.chain import parse_chain
from chaindesign.designs import (
    DEFAULT_ENUMERATION_CAP,
    collapse_chain,
    design_spec,
    export_design,
    family_params,
)
from chaindesign.errors import ChainDesignError, InfeasibleError
from chaindesign.feasibility import check_ft, search_k
from chaindesign.search import emit_table, search
from chaindesign.verify import verify_design
from chaindesign.wreath import DEFAULT_ORBIT_CAP


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaindesign",
        description="Construct, search and verify flag-transitive designs on partition chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("feasible", help="evaluate the divisibility conditions")
    p.add_argument("chain", help="coordinate sizes, e.g. 3,5,17")
    p.add_argument("k", type=int, help="block size")

    p = sub.add_parser("search-k", help="all feasible block sizes for a chain")
    p.add_argument("chain")

    p = sub.add_parser("construct", help="design parameters and optional block list")
    p.add_argument("chain")
    p.add_argument("k", type=int)
    p.add_argument("--enumerate", action="store_true", dest="enumerate_blocks")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--output", default=None)

    p = sub.add_parser("verify", help="certify the design properties")
    p.add_argument("chain")
    p.add_argument("k", type=int)
    p.add_argument("--mode", choices=["auto", "exhaustive", "arithmetic"], default="auto")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("family", help="explicit feasible family parameters")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("collapse", help="delete one nontrivial partition")
    p.add_argument("chain")
    p.add_argument("k", type=int)
    p.add_argument("--drop", type=int, required=True)

    p = sub.add_parser("search-table", help="sweep all tuples up to a size bound")
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--format", choices=["csv", "text"], default="csv")
    p.add_argument("--output", default=None)

    return parser


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _cmd_feasible(args) -> int:
    chain = parse_chain(args.chain)
    report = check_ft(chain, args.k)
    if report.feasible:
        print(f"feasible d={report.d} u={report.u} y={report.y}")
        return 0
    if not report.ft1:
        print(f"infeasible d={report.d} reason=ft1 ((v-1) does not divide (k-1)*d)")
    else:
        witness = next(w for w in report.witnesses if not w.ok)
        print(
            f"infeasible d={report.d} reason=ft2 i={witness.index} "
            f"y_i={witness.y} target={witness.divisor_target}"
        )
    return 1


def _cmd_search_k(args) -> int:
    chain = parse_chain(args.chain)
    for k, report in search_k(chain):
        print(f"k={k} d={report.d} u={report.u} y={report.y}")
    return 0


def _cmd_construct(args) -> int:
    chain = parse_chain(args.chain)
    spec = design_spec(chain, args.k)
    text = "\n".join(export_design(spec, args.enumerate_blocks, args.cap))
    _write(text, args.output)
    return 0


def _cmd_verify(args) -> int:
    chain = parse_chain(args.chain)
    cert = verify_design(
        chain,
        args.k,
        mode=args.mode,
        enum_cap=args.cap,
        orbit_cap=args.orbit_cap,
        seed=args.seed,
        samples=args.trials,
    )
    print(cert.serialize())
    spec = None
    if cert.all_passed:
        spec = design_spec(chain, args.k)
        summary = f"2-design pass lambda={spec.lam} b={spec.b}"
        if cert.mode == "exhaustive":
            summary += f" flag-orbit={spec.b * args.k}"
        else:
            summary += f" mode={cert.mode}"
        print(summary)
        return 0
    print("2-design fail")
    return 1


def _cmd_family(args) -> int:
    chain, k = family_params(args.s, args.d)
    print(f"e={chain} k={k}")
    return 0


def _cmd_collapse(args) -> int:
    chain = parse_chain(args.chain)
    collapsed, k = collapse_chain(chain, args.k, args.drop)
    report = check_ft(collapsed, k)
    print(f"e={collapsed} k={k} feasible d={report.d} u={report.u} y={report.y}")
    return 0


def _cmd_search_table(args) -> int:
    rows = search(args.s, args.max)
    _write(emit_table(rows, args.s, args.format), args.output)
    return 0


_COMMANDS = {
    "feasible": _cmd_feasible,
    "search-k": _cmd_search_k,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "family": _cmd_family,
    "collapse": _cmd_collapse,
    "search-table": _cmd_search_table,
}


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # output is exact decimal however large
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except (ChainDesignError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
