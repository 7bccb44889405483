"""Command-line surface.

Three commands: ``classify`` lists the isolated or completely isolated
subsemigroups, ``nilpotent max`` enumerates the maximal nilpotent
subsemigroups of a given degree bound, and ``verify`` runs registered
classification checks.  JSON/DOT/CSV go to files (or stdout via ``-``);
``--figures DIR`` renders matplotlib figures next to the delimited
output.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import figures, serialize
from .isolated import classify_completely_isolated, classify_isolated
from .nilpotent import (
    complete_order,
    maximal_nilpotents,
    nilpotency_degree,
    order_of,
    type_of,
)
from .pinj import DEFAULT_MAX_N, MAX_N_ENV
from .variant import SandwichContext
from .verify import REGISTRY_ORDER, applicable_ids, run_verify


def _parse_a(value: str):
    try:
        points = tuple(int(tok) for tok in value.split(",") if tok.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"--A wants a comma list of integers, got {value!r}")
    if not points:
        raise argparse.ArgumentTypeError("--A must name at least one point")
    return points


def _add_context_args(parser):
    parser.add_argument("--n", type=int, required=True, help="carrier size")
    parser.add_argument("--A", type=_parse_a, required=True, help="sandwich domain, e.g. 1,2")
    parser.add_argument("--z", type=int, default=None, help="spare point outside A (default: least)")
    parser.add_argument(
        "--max-n",
        type=int,
        default=None,
        help=f"raise the enumeration refusal bound (default {DEFAULT_MAX_N}; also {MAX_N_ENV})",
    )


def _apply_max_n(args):
    if getattr(args, "max_n", None) is not None:
        if args.max_n > DEFAULT_MAX_N:
            print(
                f"warning: raising enumeration bound to {args.max_n}; "
                "runtimes grow combinatorially",
                file=sys.stderr,
            )
        os.environ[MAX_N_ENV] = str(args.max_n)


def _context(args) -> SandwichContext:
    return SandwichContext(args.n, frozenset(args.A), args.z)


def _write(text: str, target: str):
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def _stdout_taken(*targets) -> bool:
    return any(t == "-" for t in targets if t)


def cmd_classify(args) -> int:
    _apply_max_n(args)
    ctx = _context(args)
    if args.kind == "isolated":
        sets = classify_isolated(ctx, verify=not args.no_verify)
    else:
        sets = classify_completely_isolated(ctx, verify=not args.no_verify)
    if not _stdout_taken(args.json):
        for sub in sets:
            print(f"{sub.name:12s} size={len(sub)}")
    if args.json:
        _write(serialize.dumps([serialize.subsemigroup_to_dict(s) for s in sets]), args.json)
    return 0


def cmd_nilpotent_max(args) -> int:
    _apply_max_n(args)
    ctx = _context(args)
    ts = maximal_nilpotents(ctx, args.k)
    quiet = _stdout_taken(args.json, args.dot)
    rows = []
    for t in ts:
        tv = type_of(ctx, t)
        rows.append(
            {
                "type": list(tv),
                "size": len(t),
                "degree": nilpotency_degree(ctx, t),
                "partition": serialize.partition_to_dict(
                    complete_order(ctx, order_of(ctx, t))
                ),
                "members": [serialize.pinj_to_dict(b) for b in t.members],
            }
        )
        if not quiet:
            print(f"T{tv}  size={len(t)}  degree={rows[-1]['degree']}")
    if not ts and not quiet:
        print(f"no ordered A-partitions of the doubled carrier into {args.k} blocks")
    if args.json:
        _write(serialize.dumps(rows), args.json)
    if args.dot:
        named = [(t.name or f"T{i}", order_of(ctx, t)) for i, t in enumerate(ts)]
        if len(named) == 1:
            _write(serialize.order_to_dot(named[0][1], name="ord"), args.dot)
        else:
            _write(serialize.orders_to_dot(named), args.dot)
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, t in enumerate(ts):
            figures.render_order(
                order_of(ctx, t),
                outdir / f"ord_k{args.k}_{i}.png",
                title=t.name,
            )
    return 0


def cmd_verify(args) -> int:
    _apply_max_n(args)
    if not args.all and not args.theorem:
        print("verify: give --all or --theorem ID", file=sys.stderr)
        return 2
    ids = applicable_ids(args.n, frozenset(args.A)) if args.all else [args.theorem]
    if args.all:
        skipped = [tid for tid in REGISTRY_ORDER if tid not in ids]
        if skipped:
            print(
                f"note: skipping {', '.join(skipped)} (context out of their bounds)",
                file=sys.stderr,
            )
    reports = []
    try:
        for tid in ids:
            reports.append(run_verify(tid, args.n, frozenset(args.A), args.z))
    except (KeyError, ValueError) as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    if not _stdout_taken(args.json, args.csv):
        for r in reports:
            line = f"{r.status:12s} {r.theorem_id:22s} ({r.wall_ms:.1f} ms)"
            if r.bound:
                line += f"  [{r.bound}]"
            print(line)
    if args.json:
        _write(
            serialize.dumps([serialize.report_to_dict(r, include_timing=args.timing) for r in reports]),
            args.json,
        )
    if args.csv:
        _write(serialize.reports_to_csv(reports, include_timing=args.timing), args.csv)
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        a_label = "".join(str(x) for x in sorted(args.A))
        figures.render_report_summary(
            reports,
            outdir / f"verify_n{args.n}_A{a_label}.png",
            title=f"n={args.n}, A={{{','.join(str(x) for x in sorted(args.A))}}}",
        )
    return 0 if all(r.ok for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isn-variants",
        description="exact computation in sandwich variants of the symmetric inverse semigroup",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", help="list isolated or completely isolated subsemigroups")
    classify.add_argument(
        "--kind", choices=["isolated", "completely-isolated"], required=True
    )
    _add_context_args(classify)
    classify.add_argument("--json", metavar="PATH", help="write the sets as JSON ('-' for stdout)")
    classify.add_argument("--no-verify", action="store_true", help="skip the predicate scans")
    classify.set_defaults(func=cmd_classify)

    nilp = sub.add_parser("nilpotent", help="nilpotent subsemigroup tooling")
    nsub = nilp.add_subparsers(dest="subcommand", required=True)
    nmax = nsub.add_parser("max", help="maximal nilpotent subsemigroups of degree <= k")
    _add_context_args(nmax)
    nmax.add_argument("--k", type=int, required=True, help="degree bound / number of blocks")
    nmax.add_argument("--json", metavar="PATH")
    nmax.add_argument("--dot", metavar="PATH", help="Hasse diagrams of the partition orders")
    nmax.add_argument("--figures", metavar="DIR", help="render the orders as PNGs")
    nmax.set_defaults(func=cmd_nilpotent_max)

    verify = sub.add_parser("verify", help="run the classification checks")
    scope = verify.add_mutually_exclusive_group()
    scope.add_argument("--all", action="store_true", help="every check the context admits")
    scope.add_argument("--theorem", choices=REGISTRY_ORDER, help="one registered check")
    _add_context_args(verify)
    verify.add_argument("--json", metavar="PATH")
    verify.add_argument("--csv", metavar="PATH")
    verify.add_argument("--figures", metavar="DIR", help="render a summary chart next to the reports")
    verify.add_argument("--timing", action="store_true", help="include wall times in JSON/CSV")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
