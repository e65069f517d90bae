"""Command-line front end.  Every command reads a polytope and writes JSON.

Exit codes: 0 success or verdict holds, 1 verdict refuted, 2 invalid input,
3 budget exhausted or verdict unknown.
"""
from __future__ import annotations

import argparse
import json
import sys

from .families import PhdSpec, build_expected_hrep, build_ogata_p2, build_phd, build_qk
from .groebner import verify_spec
from .linalg import BudgetExceeded
from .polytope import HRep, LatticePolytope, facet_enumeration, lattice_points, pyramid
from .report import run_theorem_report
from .semigroup import (
    GradedSemigroup,
    Verdict,
    certify_very_ample,
    default_degree_budget,
    enumerate_holes,
    is_k_normal,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3
VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_FAIL, Verdict.UNKNOWN: EXIT_UNKNOWN}
FAMILIES = ("phd", "ogata", "qk", "pyramid")


class InputError(ValueError):
    pass


def build_family(name: str, h: int | None, d: int | None, k: int | None) -> LatticePolytope:
    if name == "phd":
        if h is None or d is None:
            raise InputError("family phd needs --h and --d")
        return build_phd(PhdSpec(h, d))
    if name == "ogata":
        return build_ogata_p2()
    if name == "qk":
        return build_qk(4 if k is None else k)
    if name == "pyramid":
        return pyramid(build_qk(4 if k is None else k))
    raise InputError(f"unknown family {name!r}")


def load_polytope(args) -> LatticePolytope:
    if args.infile and args.family:
        raise InputError("give either --in or --family, not both")
    if args.infile:
        try:
            with open(args.infile) as f:
                obj = json.load(f)
        except OSError as e:
            raise InputError(f"cannot read {args.infile}: {e}") from e
        except json.JSONDecodeError as e:
            raise InputError(f"{args.infile} is not valid JSON: {e}") from e
        try:
            return LatticePolytope.from_json(obj)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad polytope JSON: {e}") from e
    if args.family:
        return build_family(args.family, args.h, args.d, args.qk)
    raise InputError("no polytope given: use --in FILE or --family NAME")


def emit(obj, args):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_family(args):
    P = build_family(args.name, args.h, args.d, args.k)
    emit(P.to_json(), args)
    return EXIT_OK


def cmd_facets(args):
    emit(facet_enumeration(load_polytope(args)).to_json(), args)
    return EXIT_OK


def cmd_points(args):
    if args.dilation < 0:
        raise InputError("--dilation must be nonnegative")
    pts = lattice_points(load_polytope(args), args.dilation)
    emit({"dilation": args.dilation, "count": len(pts), "points": [list(p) for p in pts]}, args)
    return EXIT_OK


def cmd_holes(args):
    S = GradedSemigroup(load_polytope(args))
    budget = args.budget or default_degree_budget(S.dim)
    rep = enumerate_holes(S, budget)
    emit(rep.to_json(), args)
    return EXIT_OK if rep.certified_complete else EXIT_UNKNOWN


def cmd_normal(args):
    S = GradedSemigroup(load_polytope(args))
    budget = args.budget or default_degree_budget(S.dim)
    rep = enumerate_holes(S, budget)
    if rep.holes:
        v = Verdict.NO
    else:
        v = Verdict.YES if rep.certified_complete else Verdict.UNKNOWN
    out = {"verdict": v.value, "degree_budget": budget, "stop_reason": rep.stop_reason}
    if rep.holes:
        out["witness"] = list(rep.holes[0])
    emit(out, args)
    return VERDICT_EXIT[v]


def cmd_veryample(args):
    cert = certify_very_ample(load_polytope(args), args.node_budget)
    emit(cert.to_json(), args)
    return VERDICT_EXIT[cert.verdict]


def cmd_knormal(args):
    S = GradedSemigroup(load_polytope(args))
    horizon = args.horizon or max(args.k, S.dim) + 1
    v = is_k_normal(S, args.k, horizon)
    emit(v.to_json(), args)
    return VERDICT_EXIT[v.verdict]


def cmd_groebner(args):
    if args.h is None or args.d is None:
        raise InputError("groebner-verify needs --h and --d")
    rep = verify_spec(PhdSpec(args.h, args.d), args.membership_bound)
    emit(rep.to_json(), args)
    if not rep.certified:
        return EXIT_UNKNOWN
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_report(args):
    spec = PhdSpec(args.h, args.d)
    facets = None
    if args.drop_facet:
        H = facet_enumeration(build_phd(spec))
        kept = tuple(hs for hs in H.halfspaces if hs.key != _facet_key(spec, args.drop_facet))
        if len(kept) == len(H):
            raise InputError(f"no computed facet matches {args.drop_facet!r}")
        facets = HRep(kept)
    rep = run_theorem_report(
        spec,
        facets=facets,
        degree_budget=args.budget,
        horizon=args.horizon,
        groebner=not args.no_groebner,
        membership_bound=args.membership_bound,
    )
    emit(rep.to_json(timings=args.timings), args)
    return rep.exit_code


def _facet_key(spec: PhdSpec, label: str):
    for hs in build_expected_hrep(spec).halfspaces:
        if hs.label == label:
            return hs.key
    raise InputError(f"unknown facet label {label!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyhole", description="Holes, normality and very ampleness of lattice polytopes")
    sub = parser.add_subparsers(dest="command", required=True)

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--out", help="write JSON here instead of stdout")

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--in", dest="infile", help="polytope JSON file")
    src.add_argument("--family", choices=FAMILIES, help="use a built-in polytope instead of --in")
    src.add_argument("--h", type=int)
    src.add_argument("--d", type=int)
    src.add_argument("--qk", type=int, help="k for the qk and pyramid families (default 4)")

    p = sub.add_parser("family", parents=[io], help="emit a built-in polytope")
    p.add_argument("name", choices=FAMILIES)
    p.add_argument("--h", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("facets", parents=[io, src], help="facet description")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("points", parents=[io, src], help="lattice points of a dilation")
    p.add_argument("--dilation", type=int, default=1)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("holes", parents=[io, src], help="enumerate holes")
    p.add_argument("--budget", type=int, help="degree budget (default max(d+3, 8))")
    p.set_defaults(func=cmd_holes)

    p = sub.add_parser("normal", parents=[io, src], help="normality verdict")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_normal)

    p = sub.add_parser("veryample", parents=[io, src], help="very-ampleness certificate")
    p.add_argument("--node-budget", type=int, default=200_000)
    p.set_defaults(func=cmd_veryample)

    p = sub.add_parser("knormal", parents=[io, src], help="k-normality verdict")
    p.add_argument("--k", dest="k", type=int, required=True)
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_knormal)

    p = sub.add_parser("groebner-verify", parents=[io], help="check G1..G8 is a Gröbner basis")
    p.add_argument("--h", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--membership-bound", type=int)
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("report", parents=[io], help="full check of P(h, d)")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--membership-bound", type=int)
    p.add_argument("--no-groebner", action="store_true")
    p.add_argument("--drop-facet", metavar="LABEL", help="remove one facet (e.g. H5,2) before checking")
    p.add_argument("--timings", action="store_true", help="include runtime_ms per stage")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"polyhole: budget exhausted: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ValueError, TypeError) as e:
        print(f"polyhole: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
