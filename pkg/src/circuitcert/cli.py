"""Command line front end.

Exit codes: 0 affirmative, 1 negative, 2 unknown, 64 usage error, 65 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .amoeba import Solidity, classify_point, is_solid, raster
from .certify import certify
from .convexity import Convexity, is_convex
from .errors import CircuitCertError
from .lattice import simplex_split
from .mediated import SimplexClass, h_simplex_sufficient_2d, is_sos, maximal_mediated_set
from .poly import CircuitPoly, MonomialSquares, parse_poly, validate_circuit
from .polytri import PolygonSupport, interior_lattice_points, necessity_check_sos, universal_sos_criterion
from .sonc import certificate_from_json, sonc_certificate, verify_certificate

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _points(text: str):
    """'0,0;4,2;2,4' -> [(0, 0), (4, 2), (2, 4)]"""
    try:
        return [tuple(int(x) for x in chunk.split(",")) for chunk in text.split(";") if chunk.strip()]
    except ValueError:
        raise UsageError(f"cannot read points from {text!r}") from None


def _floats(text: str, count: int):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot read numbers from {text!r}") from None
    if len(vals) != count:
        raise UsageError(f"expected {count} comma-separated numbers, got {len(vals)}")
    return vals


def _source(args) -> Optional[str]:
    if args.expr is not None and args.input is not None:
        raise UsageError("give either -e EXPR or an input file, not both")
    if args.expr is not None:
        return args.expr
    if args.input is None:
        return None
    if args.input == "-":
        return sys.stdin.read()
    try:
        return Path(args.input).read_text()
    except OSError as exc:
        raise CircuitCertError(f"cannot read {args.input}: {exc.strerror}") from None


def _require_source(args) -> str:
    src = _source(args)
    if src is None:
        raise UsageError("an input polynomial is required (-e EXPR or a file)")
    return src


def _poly(args):
    return parse_poly(_require_source(args).strip())


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, text lines, exit code)


def cmd_certify(args):
    verdict = certify(_poly(args), precision=args.precision)
    obj = verdict.to_json_obj()
    lines = [f"status: {verdict.status.value}"]
    if verdict.theta_log is not None:
        lines.append(f"log Theta: {verdict.theta_log:.17g} ({verdict.exactness})")
    if verdict.zeros:
        lines.append(f"zeros ({len(verdict.zeros)}): " + ", ".join(str(z) for z in verdict.zeros))
    if verdict.witness:
        lines.append(f"negative at: {verdict.witness}")
    return obj, lines, EXIT_YES if verdict.is_nonnegative else EXIT_NO


def cmd_sos(args):
    p = _poly(args)
    f = validate_circuit(p)
    if isinstance(f, MonomialSquares):
        obj = {"binomial_squares": None, "reason": "sum of monomial squares", "sos": True}
    else:
        obj = is_sos(f).to_json_obj()
    lines = [f"sos: {obj['sos']} ({obj['reason']})"]
    return obj, lines, EXIT_YES if obj["sos"] else EXIT_NO


def cmd_sonc(args):
    out = sonc_certificate(_poly(args))
    obj = out.to_json_obj()
    if args.out and out.certificate is not None:
        Path(args.out).write_text(out.certificate.to_json() + "\n")
        obj["written"] = args.out
    lines = [f"status: {out.status} ({out.message})"]
    if out.certificate is not None:
        lines += [f"  {piece}" for _, piece in out.certificate.pieces]
    code = {"SONC": EXIT_YES, "NotSONC": EXIT_NO}.get(out.status, EXIT_UNKNOWN)
    return obj, lines, code


def _circuit(args) -> CircuitPoly:
    f = validate_circuit(_poly(args), require_even=False)
    if not isinstance(f, CircuitPoly):
        raise CircuitCertError("amoeba commands need a polynomial with an inner term")
    return f


def cmd_amoeba(args):
    f = _circuit(args)
    report = is_solid(f)
    obj = report.to_json_obj()
    lines = [f"solid: {report.solid.value}", f"Theta_f = {report.theta_f!r}", f"Psi_f = {report.psi_f!r}"]
    if args.point:
        pc = classify_point(f, _floats(args.point, f.n))
        obj["point"] = pc.to_json_obj()
        lines.append(f"point: {pc.verdict.value}")
    code = {Solidity.SOLID: EXIT_YES, Solidity.NOT_SOLID: EXIT_NO}.get(report.solid, EXIT_UNKNOWN)
    return obj, lines, code


def cmd_raster(args):
    f = _circuit(args)
    lo1, lo2, hi1, hi2 = _floats(args.box, 4)
    grid = raster(f, ((lo1, lo2), (hi1, hi2)), args.resolution)
    from .amoeba import Verdict

    counts = {v.value: grid.count(v) for v in Verdict}
    obj = {"box": [lo1, lo2, hi1, hi2], "counts": counts, "resolution": args.resolution}
    if args.out:
        grid.write_csv(f"{args.out}.csv")
        grid.write_pgm(f"{args.out}.pgm")
        obj["written"] = [f"{args.out}.csv", f"{args.out}.pgm"]
    lines = [f"{k}: {v}" for k, v in counts.items()]
    return obj, lines, EXIT_YES


def cmd_mediated(args):
    if args.vertices:
        if _source(args) is not None:
            raise UsageError("give either --vertices or a polynomial, not both")
        vertices = _points(args.vertices)
    else:
        vertices, _ = simplex_split(_poly(args))
    res = maximal_mediated_set(vertices)
    obj = res.to_json_obj()
    obj["sufficient_test"] = h_simplex_sufficient_2d(res.vertices).value
    lines = [
        f"class: {res.classification.value}",
        f"|Delta*| = {len(res.delta_star)} of {len(res.all_points)} lattice points",
        f"sufficient test: {obj['sufficient_test']}",
    ]
    return obj, lines, EXIT_YES if res.classification is SimplexClass.H else EXIT_NO


def cmd_convexity(args):
    v = is_convex(_poly(args))
    code = {Convexity.CONVEX: EXIT_YES, Convexity.NOT_CONVEX: EXIT_NO}.get(v.status, EXIT_UNKNOWN)
    lines = [f"{v.status.value} ({v.reason.value})"] + ([v.note] if v.note else [])
    if v.witness:
        lines.append("Hessian not PSD at " + ", ".join(str(x) for x in v.witness))
    return v.to_json_obj(), lines, code


def cmd_polytope(args):
    if not args.vertices or not args.inner:
        raise UsageError("polytope needs --vertices and --inner")
    (inner,) = _points(args.inner)
    poly = PolygonSupport.create(_points(args.vertices), inner)
    report = universal_sos_criterion(poly)
    obj = report.to_json_obj()
    obj["vertices"] = [list(v) for v in poly.vertices]
    obj["inner"] = list(poly.inner)
    obj["interior_points"] = [list(p) for p in interior_lattice_points(poly)]
    obj["y_in_Q_star"] = necessity_check_sos(poly)
    lines = [
        f"universal SOS: {report.universal_sos}",
        f"triangulations: {len(report.per_triangulation)}",
        f"y in Q*: {obj['y_in_Q_star']}",
    ]
    return obj, lines, EXIT_YES if report.universal_sos else EXIT_NO


def cmd_verify(args):
    cert = certificate_from_json(_require_source(args))
    ok = verify_certificate(cert)
    obj = {"exact": cert.exact, "pieces": len(cert.pieces), "valid": ok}
    return obj, [f"valid: {ok}"], EXIT_YES if ok else EXIT_NO


COMMANDS = {
    "certify": (cmd_certify, "decide nonnegativity of a circuit polynomial"),
    "sos": (cmd_sos, "decide whether a nonnegative circuit polynomial is a sum of squares"),
    "sonc": (cmd_sonc, "build a SONC certificate (simplex support, several inner terms)"),
    "amoeba": (cmd_amoeba, "amoeba solidness and point classification"),
    "raster": (cmd_raster, "classify a grid of log points and write CSV/PGM"),
    "mediated": (cmd_mediated, "maximal mediated set of an even simplex"),
    "convexity": (cmd_convexity, "convexity verdict"),
    "polytope": (cmd_polytope, "universal SOS criterion on an even polygon"),
    "verify": (cmd_verify, "re-check a SONC certificate file"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circuitcert", description="Certificates for polynomials supported on circuits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("input", nargs="?", help="input file ('-' for stdin)")
        p.add_argument("-e", "--expr", help="inline polynomial (text grammar or JSON)")
        p.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
        p.add_argument("--precision", type=int, default=128, metavar="BITS", help="first rung of the precision ladder")
        p.add_argument("--out", metavar="PATH", help="output file (raster: prefix for .csv/.pgm)")
        if name == "amoeba":
            p.add_argument("--point", help="log point w1,...,wn to classify")
        if name == "raster":
            p.add_argument("--box", default="-3,-3,3,3", help="lo1,lo2,hi1,hi2")
            p.add_argument("--resolution", type=int, default=256)
        if name in ("mediated", "polytope"):
            p.add_argument("--vertices", help="points as 'x,y;x,y;...'")
        if name == "polytope":
            p.add_argument("--inner", help="inner lattice point 'x,y'")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 53:
        parser.error("--precision must be at least 53 bits")
    handler = COMMANDS[args.command][0]
    try:
        obj, lines, code = handler(args)
    except UsageError as exc:
        sys.stderr.write(f"circuitcert {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except CircuitCertError as exc:
        sys.stderr.write(f"circuitcert {args.command}: {exc}\n")
        return EXIT_DATA
    if args.text:
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    return code


def run(argv: List[str]) -> int:
    """Entry point that turns SystemExit from argument parsing into a return code."""
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
