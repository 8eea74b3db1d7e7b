"""Command line interface.

Exit codes: 0 success, 1 invalid input, 2 internal consistency failure
(a proven invariant failed, i.e. a bug), 3 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .certificate import ParityCertificate, verify_certificate
from .dissection import Dissection, dual_of, render_svg, stein_check
from .dyadic import INF
from .errors import InternalConsistencyError, InvalidInput
from .gen import GenConfig, generate
from .graph import BalancedGraph, census, lemma1_audit, edge_nesting_audit, primitive_cycles
from .reduction import lemma5_audit, reduce_and_certify

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 3

CENSUS_SCHEMA = "census-report/1"
AUDIT_SCHEMA = "audit-report/1"
VERIFY_SCHEMA = "verify-report/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise InvalidInput(f"{path}: {exc.strerror}") from None


def _write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(path) -> BalancedGraph:
    return BalancedGraph.from_json(_read_json(path))


class _Out:
    def __init__(self, args):
        self.json = getattr(args, "json", False)
        self.quiet = getattr(args, "quiet", False)

    def emit(self, report: dict, text: str):
        if self.json:
            sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
        elif not self.quiet:
            print(text)


def cmd_check_graph(args) -> int:
    G = _load_graph(args.file)
    c = census(G)
    s = c.summary()
    _Out(args).emit({"schema": CENSUS_SCHEMA, **c.to_json()},
                    f"M={s['M']} count={s['count']} {s['parity']}")
    return EXIT_OK if c.even else EXIT_INTERNAL


def cmd_reduce(args) -> int:
    G = _load_graph(args.file)
    cert = reduce_and_certify(G)
    verify_certificate(G, cert)
    obj = cert.to_json()
    if args.trace:
        _write_json(args.trace, obj)
    c = cert.conclusion
    _Out(args).emit(obj, f"rounds={len(cert.rounds)} branches={','.join(cert.branches)} "
                         f"M={c['M']} count={c['count']} {c['parity']} ({cert.reason})")
    return EXIT_OK


def cmd_verify_certificate(args) -> int:
    G = _load_graph(args.graph)
    cert = ParityCertificate.from_json(_read_json(args.certificate))
    s = verify_certificate(G, cert)
    _Out(args).emit({"schema": VERIFY_SCHEMA, "verified": True, "conclusion": s},
                    f"certificate verified: M={s['M']} count={s['count']} {s['parity']}")
    return EXIT_OK


def cmd_stein(args) -> int:
    D = Dissection.from_json(_read_json(args.file))
    report = stein_check(D, certificate=args.certificate)
    if args.svg:
        glued, _, _ = dual_of(D)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(glued, report.multiplicities))
    obj = report.to_json()
    _Out(args).emit(obj, f"triangles={report.triangle_count} inserted={report.inserted_degenerate} "
                         f"M={obj['census']['M']} count={obj['census']['count']}: {report.conclusion}")
    return EXIT_OK


def cmd_gen(args) -> int:
    config = GenConfig(vertices=args.vertices, seed=args.seed, bound=args.bound,
                       scale_exp=args.scale_exp, congruence_depth=args.congruence_depth)
    G = generate(config)
    _write_json(args.output, G.to_json())
    return EXIT_OK


def cmd_audit(args) -> int:
    G = _load_graph(args.file)
    lemma1_audit(G)
    checked = edge_nesting_audit(G)
    c = census(G)
    cycles = 0
    if c.minimum not in (0, INF):
        for C in primitive_cycles(G):
            lemma5_audit(G, C)
            cycles += 1
    report = {"schema": AUDIT_SCHEMA, "ok": True, "vertices": len(G.vertices),
              "nesting_edges": checked, "cycles": cycles}
    _Out(args).emit(report, f"audit ok: primitive counts on {len(G.vertices)} vertices, "
                            f"nesting on {checked} primitive edges, {cycles} cycles")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="no human-readable output")
    p = _Parser(prog="steinparity", parents=[common],
                description="Balanced 3-valent graphs, parity certificates and Stein dissections.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("check-graph", parents=[common], help="census of minimal multiplicities")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_graph)

    s = sub.add_parser("reduce", parents=[common], help="run the parity reduction")
    s.add_argument("file")
    s.add_argument("--trace", metavar="OUT", help="write the certificate JSON here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify-certificate", parents=[common], help="re-check a stored certificate")
    s.add_argument("graph")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify_certificate)

    s = sub.add_parser("stein", parents=[common], help="check a dissection of a balanced polygon")
    s.add_argument("file")
    s.add_argument("--certificate", action="store_true", help="attach a parity certificate")
    s.add_argument("--svg", metavar="OUT", help="draw the dissection with multiplicities")
    s.set_defaults(func=cmd_stein)

    s = sub.add_parser("gen", parents=[common], help="random balanced graph JSON")
    s.add_argument("--vertices", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--bound", type=int, default=4096)
    s.add_argument("--scale-exp", type=int, default=0)
    s.add_argument("--congruence-depth", type=int, default=0)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("audit", parents=[common], help="run the structural audits on a graph")
    s.add_argument("file")
    s.set_defaults(func=cmd_audit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InvalidInput as exc:
        _report_error(args, exc)
        return EXIT_INVALID
    except InternalConsistencyError as exc:
        _report_error(args, exc)
        return EXIT_INTERNAL


def _report_error(args, exc):
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps({"schema": "error/1", **exc.report()}, sort_keys=True) + "\n")
    print(f"error: {exc.kind}: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
