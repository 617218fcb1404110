"""Command-line front end.

One subcommand per pipeline stage plus the composite `verdict`.  Output
is deterministic JSON on stdout (byte-identical across runs for equal
inputs); errors go to stderr as one JSON object with a module-qualified
code.  Exit status: 0 for success and certified outcomes, 1 for
NoneFound/Inconclusive, 2 for bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize
from .cohomology import cohomology
from .einvariant import generalized_e, p_local_triviality
from .errors import ParseError, QtorError
from .ktheory import admissible_basis, chern_image, skeleton_truncate
from .manifold import load_manifold


def _manifold_ring(path):
    v = load_manifold(path)
    return v, cohomology(v)


def _truncated(kl, degree_cap):
    if degree_cap is None:
        return kl
    return skeleton_truncate(kl, degree_cap)


def cmd_validate(args):
    v = load_manifold(args.input)
    return 0, serialize.validation_summary(v)


def cmd_cohomology(args):
    _, ring = _manifold_ring(args.input)
    return 0, serialize.ring_to_dict(ring)


def cmd_klattice(args):
    _, ring = _manifold_ring(args.input)
    kl = _truncated(chern_image(ring), args.degree_cap)
    return 0, serialize.klattice_to_dict(kl)


def cmd_admissible(args):
    _, ring = _manifold_ring(args.input)
    kl = _truncated(chern_image(ring), args.degree_cap)
    return 0, serialize.admissible_to_dict(admissible_basis(kl))


def cmd_einv(args):
    cone = serialize.load_cone(args.input)
    rep = generalized_e(cone)
    out = {"report": serialize.report_to_dict(rep), "verdict": None}
    code = 0
    if args.prime is not None:
        verdict = p_local_triviality(rep, args.prime, rep.base_top)
        out["verdict"] = serialize.triviality_to_dict(verdict)
        if not verdict:
            code = 1
    return code, out


def cmd_iso(args):
    from .rigidity import find_ring_iso
    _, ra = _manifold_ring(args.a)
    _, rb = _manifold_ring(args.b)
    found = find_ring_iso(ra, rb, args.bound)
    if found:
        return 0, {"found": True, "iso": serialize.iso_to_dict(found, "found")}
    return 1, {"found": False, "reason": found.reason, "bound": found.bound}


def cmd_verdict(args):
    from .rigidity import verdict
    va = load_manifold(args.a)
    vb = load_manifold(args.b)
    result = verdict(va, vb, bound=args.bound, prime_cap=args.prime_cap)
    return (0 if result.iso_status != "none" else 1), serialize.verdict_to_dict(result)


def _add_output_flags(sub):
    sub.add_argument("--json", action="store_true",
                     help="compact single-line JSON (the default)")
    sub.add_argument("--pretty", action="store_true", help="indented JSON")
    sub.add_argument("--out", metavar="FILE", help="write the report to FILE")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qtor",
        description="exact cohomology, K-theory and stable rigidity "
                    "certificates for quasitoric manifolds")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="check combinatorial manifold data")
    sub.add_argument("input")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_validate)

    sub = subs.add_parser("cohomology", help="integral cohomology ring")
    sub.add_argument("input")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_cohomology)

    sub = subs.add_parser("klattice", help="Chern-character lattice")
    sub.add_argument("input")
    sub.add_argument("--degree-cap", type=int, default=None,
                     help="restrict to the skeleton of this even degree")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_klattice)

    sub = subs.add_parser("admissible", help="canonical admissible basis")
    sub.add_argument("input")
    sub.add_argument("--degree-cap", type=int, default=None,
                     help="restrict to the skeleton of this even degree")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_admissible)

    sub = subs.add_parser("einv", help="generalized e-invariant report for a cone")
    sub.add_argument("input")
    sub.add_argument("--prime", type=int, default=None,
                     help="also decide p-local triviality at this odd prime")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_einv)

    sub = subs.add_parser("iso", help="search for a cohomology ring isomorphism")
    sub.add_argument("a")
    sub.add_argument("b")
    sub.add_argument("--bound", type=int, default=3,
                     help="entry bound for the degree-2 matrix search (default 3)")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_iso)

    sub = subs.add_parser("verdict", help="per-prime stable rigidity verdict")
    sub.add_argument("a")
    sub.add_argument("b")
    sub.add_argument("--bound", type=int, default=3,
                     help="entry bound for the isomorphism search (default 3)")
    sub.add_argument("--prime-cap", type=int, default=97,
                     help="largest prime reported individually (default 97)")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_verdict)

    return parser


def _emit(obj, args, stream):
    text = serialize.dumps(obj, pretty=args.pretty)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, obj = args.handler(args)
    except QtorError as exc:
        err = {"error": {"code": exc.code, "message": str(exc)}}
        if isinstance(exc, ParseError) and exc.field:
            err["error"]["field"] = exc.field
        sys.stderr.write(serialize.dumps(err, pretty=args.pretty))
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        err = {"error": {"code": "qtor.Input", "message": str(exc)}}
        sys.stderr.write(serialize.dumps(err, pretty=args.pretty))
        return 2
    _emit(obj, args, sys.stdout)
    return code


def entrypoint():
    raise SystemExit(main())
