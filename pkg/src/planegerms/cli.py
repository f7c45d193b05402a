"""Command line entry point.

Exit codes: 0 success or Compatible, 1 Distinct, 2 bad input, 3 internal
invariant violation, 4 unresolved (precision cap reached).
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .analysis import GermAnalysis, InvariantViolation, NotAGerm, analyze
from .parser import ParseError, parse_poly
from .puiseux import Unresolved

EXIT_OK, EXIT_DISTINCT, EXIT_INPUT, EXIT_INVARIANT, EXIT_UNRESOLVED = 0, 1, 2, 3, 4


def _read(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return arg


def _margin(text: str) -> Fraction:
    m = Fraction(text)
    if m <= 0:
        raise argparse.ArgumentTypeError("margin must be positive")
    return m


def _analyze(expr: str, args, shear: int | None = None) -> GermAnalysis:
    f = parse_poly(_read(expr))
    kw = {"margin": args.margin, "max_order": args.max_order}
    s = args.shear if shear is None else shear
    if s:
        kw["shear"] = s
    return analyze(f, **kw)


def cmd_analyze(args) -> int:
    from .report import build_report, to_json, to_text, tree_text

    g = _analyze(args.germ, args)
    if args.format == "dot":
        print(tree_text(g, "dot"))
        return EXIT_OK
    rep = build_report(g, args.max_terms)
    print(to_json(rep) if args.format == "structured" else to_text(rep))
    return EXIT_OK


def cmd_tree(args) -> int:
    from .report import tree_text

    g = _analyze(args.germ, args)
    print(tree_text(g, "dot" if args.format == "dot" else "ascii"))
    return EXIT_OK


def cmd_compare(args) -> int:
    from .algebra import run_with_splitting
    from .canyons import compare_lipschitz
    from .clusters import compare_topo

    f = parse_poly(_read(args.f))
    g = parse_poly(_read(args.g))

    def both(ctx):
        a = GermAnalysis(f, ctx, margin=args.margin, max_order=args.max_order)
        b = GermAnalysis(g, ctx, margin=args.margin, max_order=args.max_order, shear=args.shear)
        if args.level == "topo":
            v = compare_topo(a, b)
            return v.compatible, v.witness
        v = compare_lipschitz(a, b)
        return v.compatible, v.witness

    ok, witness = run_with_splitting(both)
    print(("Compatible" if ok else "Distinct") + f": {witness}")
    return EXIT_OK if ok else EXIT_DISTINCT


def cmd_verify(args) -> int:
    from .canyons import lipschitz_signature
    from .clusters import topo_signature
    from .polar import NonIsolated, milnor_number

    rng = random.Random(args.seed)
    extra = rng.randint(1, 9)
    first = _analyze(args.germ, args)
    second = _analyze(args.germ, args, shear=(args.shear or 0) + extra)

    def summary(g):
        try:
            mu = str(milnor_number(g))
        except NonIsolated:
            mu = "inf"
        return {"topological": topo_signature(g).serialize(),
                "lipschitz": lipschitz_signature(g), "mu": mu}

    a, b = summary(first), summary(second)
    print(f"run 1: shear {first.shear}")
    for k, v in a.items():
        print(f"  {k}: {v}")
    print(f"run 2: shear {second.shear} (extra {extra}, seed {args.seed})")
    for k, v in b.items():
        print(f"  {k}: {v}")
    if a != b:
        bad = [k for k in a if a[k] != b[k]]
        raise InvariantViolation("invariants changed under a coordinate shear: " + ", ".join(bad))
    print("verified: all invariants agree")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planegerms",
                                description="Invariants of plane curve germs f(x, y) = 0 at the origin.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--margin", type=_margin, default=Fraction(1),
                        help="extra precision past the exponents each result depends on")
    common.add_argument("--shear", type=int, default=0, help="apply y -> y + SHEAR*x first")
    common.add_argument("--seed", type=int, default=1, help="seed for the verify shear")
    common.add_argument("--max-terms", type=int, default=None, dest="max_terms",
                        help="print at most this many terms of each series (display only)")
    common.add_argument("--max-order", type=int, default=400, dest="max_order",
                        help="give up (exit 4) when an arc needs more precision than this")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full report")
    a.add_argument("germ", help="polynomial expression, or @file")
    a.add_argument("--format", choices=["text", "structured", "dot"], default="text")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("tree", parents=[common], help="Kuo-Lu tree with polar attachments")
    t.add_argument("germ")
    t.add_argument("--format", choices=["ascii", "text", "dot"], default="ascii")
    t.set_defaults(func=cmd_tree)

    c = sub.add_parser("compare", parents=[common], help="necessary conditions for equivalence")
    c.add_argument("f")
    c.add_argument("g")
    c.add_argument("--level", choices=["topo", "lipschitz"], default="topo")
    c.set_defaults(func=cmd_compare)

    v = sub.add_parser("verify", parents=[common], help="recompute after a seeded extra shear")
    v.add_argument("germ")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, NotAGerm, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except Unresolved as e:
        print(f"unresolved: {e}", file=sys.stderr)
        return EXIT_UNRESOLVED


if __name__ == "__main__":
    sys.exit(main())
