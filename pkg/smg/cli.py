# smg/cli.py

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from typing import Any

from smg.constructions.base import ConstructionResult
from smg.constructions.registry import available, build
from smg.constructions.robinson import solve_orbits
from smg.core.config import Settings, load_settings
from smg.core.errors import GraphFileError, SmgError
from smg.core.logger import attach_trace_file, get_logger
from smg.graph.discharging import audit
from smg.graph.verifier import VerificationReport, VerifyProfile, verify_all
from smg.io.exporters import EXPORTERS, export
from smg.io.graph_file import read_graph, write_graph, write_text_atomic

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

TRACE_LOGGERS = (
    "smg.constructions.exact",
    "smg.constructions.robinson",
    "smg.constructions.search",
    "smg.constructions.solver",
)


# ---------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------

def _print_json(data: Any) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _print_report(report: VerificationReport) -> None:
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        margin = "" if check.margin is None else f" margin={check.margin:.3e}"
        print(f"{status} {check.name}{margin} {check.detail}".rstrip())
        for w in check.witnesses:
            print(f"    witness {json.dumps(w, sort_keys=True)}")
    print(f"overall: {'PASS' if report.overall else 'FAIL'}")


def _apply_overrides(settings: Settings, args: argparse.Namespace) -> Settings:
    search = settings.search.model_copy(
        update={
            k: v
            for k, v in (("seed", getattr(args, "seed", None)), ("starts", getattr(args, "starts", None)))
            if v is not None
        }
    )
    polish = settings.polish
    if getattr(args, "polish_tol", None) is not None:
        polish = polish.model_copy(update={"tol": args.polish_tol})
    return settings.model_copy(update={"search": search, "polish": polish})


def _write_result(result: ConstructionResult, path: str) -> int:
    print(json.dumps(result.summary(), sort_keys=True))
    if not result.certified:
        _print_report(result.certificate)
        return EXIT_FAILED
    write_graph(result.graph, path, residual_max=result.residual_max)
    logger.info(f"Wrote {result.graph.name} to {path}")
    return EXIT_OK


# ---------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------

def cmd_construct(args: argparse.Namespace, settings: Settings) -> int:
    result = build(args.name, _apply_overrides(settings, args))
    return _write_result(result, args.output)


def cmd_solve_orbits(args: argparse.Namespace, settings: Settings) -> int:
    result = solve_orbits(args.group, args.orbits, args.degree, _apply_overrides(settings, args))
    return _write_result(result, args.output)


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    g = read_graph(args.file, settings.verifier.unit_tol)
    tol = args.tol if args.tol is not None else settings.verifier.tol
    if args.regular is not None:
        profile = VerifyProfile(k=args.regular, regular=True, tol=tol)
    else:
        profile = VerifyProfile(k=args.min_degree, regular=False, tol=tol)
    report = verify_all(g, profile)
    if args.json:
        _print_json(report.as_dict())
    else:
        _print_report(report)
    return EXIT_OK if report.overall else EXIT_FAILED


def cmd_audit(args: argparse.Namespace, settings: Settings) -> int:
    g = read_graph(args.file, settings.verifier.unit_tol)
    tol = args.tol if args.tol is not None else settings.verifier.tol
    result = audit(g, tol=tol)
    if args.json:
        _print_json(result.as_dict())
    else:
        ledger = result.ledger
        print(f"V={result.euler.V} E={result.euler.E} F={result.euler.F} connected={result.euler.connected}")
        print(f"total_initial={ledger.total_initial:.3e} total_final={ledger.total_final:.3e}")
        print(f"euler_adjusted_total={result.euler_adjusted_total:.3e}")
        print(f"min_vertex_final={result.min_vertex_final:.3e} min_face_final={result.min_face_final:.3e}")
        print(f"all_finals_zero={result.all_finals_zero}")
        for flag, value in ledger.equality_flags.as_dict().items():
            print(f"{flag}={value}")
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_export(args: argparse.Namespace, settings: Settings) -> int:
    g = read_graph(args.file, settings.verifier.unit_tol)
    text = export(g, args.format, view=args.view)
    write_text_atomic(args.output, text)
    return EXIT_OK


# ---------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smg", description="Spherical matchstick graphs: construct, verify, audit, export"
    )
    parser.add_argument("--trace", metavar="FILE", help="Write solver traces to FILE")
    parser.add_argument("--config", metavar="DIR", help="Directory holding the YAML settings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="Build and certify a named graph")
    p.add_argument("name", choices=available())
    p.add_argument("--seed", type=int)
    p.add_argument("--starts", type=int)
    p.add_argument("--polish-tol", type=float)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="Run every check on a graph file")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--min-degree", type=int, default=5)
    mode.add_argument("--regular", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="Run the discharging ledger on a graph file")
    p.add_argument("file")
    p.add_argument("--tol", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("export", help="Write OFF, SVG or CSV")
    p.add_argument("file")
    p.add_argument("--format", choices=sorted(EXPORTERS), required=True)
    p.add_argument("--view", type=float, nargs=3, default=(0.0, 0.0, 1.0), metavar=("X", "Y", "Z"))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("solve-orbits", help="Experimental orbit search")
    p.add_argument("--group", required=True, choices=["O", "I", "O24", "I60"])
    p.add_argument("--orbits", type=int, required=True)
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--seed", type=int)
    p.add_argument("--starts", type=int)
    p.add_argument("--polish-tol", type=float)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_solve_orbits)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.trace:
        attach_trace_file(args.trace, TRACE_LOGGERS)

    try:
        settings = load_settings(args.config)
        return int(args.func(args, settings))
    except GraphFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SmgError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
