"""Command-line entry point."""

from __future__ import annotations

import json
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Dict, List, Optional

from loguru import logger

from .algebra.fields import CoefficientField
from .algebra.resultant import resultant
from .config import settings
from .cremona import CremonaMap, compose, pullback, verify_involution
from .errors import AlgebraError, ParseError, ScenarioError
from .parser import free_variables, parse_expression
from .report import FORMAT_ALIASES, FORMATS, render_report, save_report
from .scenarios import load_map
from .suite import SECTIONS, detect_errata, run_all
from .utils.formatting import format_expression

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2


def configure_logging(level: Optional[str] = None) -> None:
    logger.remove()
    logger.add(sys.stderr, level=(level or settings.log_level).upper())
    logger.enable(__package__)


def _map_to_dict(m: CremonaMap) -> Dict[str, object]:
    return {
        "variables": list(m.variables),
        "images": {v: format_expression(img) for v, img in zip(m.variables, m.images)},
    }


def _print_json(payload: object) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def cmd_verify(args: Namespace) -> int:
    sections = list(SECTIONS) if args.section == "all" else [args.section]
    report = run_all(
        seed=args.seed,
        sections=sections,
        workers=args.workers,
        with_properties=not args.no_properties,
        with_errata=args.section == "all" or args.errata,
        mutations=0 if args.no_properties else args.mutations,
    )
    text = render_report(report, args.format, args.timings)
    if args.report:
        save_report(report, Path(args.report), args.format, args.timings)
        logger.info("Report written", path=args.report)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_apply(args: Namespace) -> int:
    m = load_map(Path(args.map))
    expr = parse_expression(args.expr, m.variables, m.field)
    print(format_expression(pullback(m, expr)))
    return EXIT_OK


def cmd_compose(args: Namespace) -> int:
    outer, inner = (load_map(Path(p)) for p in args.map)
    _print_json(_map_to_dict(compose(outer, inner)))
    return EXIT_OK


def cmd_involution_check(args: Namespace) -> int:
    m = load_map(Path(args.map))
    ok = verify_involution(m)
    _print_json({"involution": ok, "square": _map_to_dict(compose(m, m))})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_resultant(args: Namespace) -> int:
    first, second = args.poly
    variables = tuple(args.variables.split(",")) if args.variables else free_variables(first, second, args.var)
    field = CoefficientField.of_characteristic(args.characteristic)
    polys = []
    for text in (first, second):
        expr = parse_expression(text, variables, field)
        if not expr.is_polynomial():
            raise ParseError(f"{text!r} is not a polynomial")
        polys.append(expr.as_polynomial())
    print(format_expression(resultant(polys[0], polys[1], args.var)))
    return EXIT_OK


def cmd_errata(args: Namespace) -> int:
    verdicts = detect_errata(seed=args.seed)
    _print_json(verdicts)
    return EXIT_OK if verdicts["passed"] else EXIT_FAILED


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="cremona", description="Exact verification of a Cremona involution's fixed field")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL for this run")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify-paper", aliases=["verify"], help="Run the scenario suite and print a report")
    verify.add_argument("--section", default="all", choices=[*SECTIONS, "all"])
    verify.add_argument("--seed", type=int, default=settings.seed)
    verify.add_argument("--report", default=None, help="Also write the report to this path")
    verify.add_argument("--format", default="text", choices=[*FORMATS, *FORMAT_ALIASES])
    verify.add_argument("--timings", action="store_true", help="Include per-step durations")
    verify.add_argument("--workers", type=int, default=1, help="Run scenarios in this many processes")
    verify.add_argument("--errata", action="store_true", help="Compare readings even for a single section")
    verify.add_argument("--no-properties", action="store_true", help="Skip the randomized property suites")
    verify.add_argument("--mutations", type=int, default=10, help="Size of the relation mutation sweep")
    verify.set_defaults(handler=cmd_verify)

    apply = sub.add_parser("apply", help="Pull an expression back along a map")
    apply.add_argument("--map", required=True, help="Map JSON file")
    apply.add_argument("--expr", required=True)
    apply.set_defaults(handler=cmd_apply)

    comp = sub.add_parser("compose", help="Compose two maps; the first is applied last")
    comp.add_argument("--map", action="append", required=True, help="Map JSON file (twice)")
    comp.set_defaults(handler=cmd_compose)

    inv = sub.add_parser("involution-check", help="Check that a map has order two")
    inv.add_argument("--map", required=True)
    inv.set_defaults(handler=cmd_involution_check)

    res = sub.add_parser("resultant", help="Resultant of two polynomials in one variable")
    res.add_argument("--var", required=True)
    res.add_argument("--poly", action="append", required=True, help="Polynomial text (twice)")
    res.add_argument("--variables", default=None, help="Comma-separated ring variables")
    res.add_argument("--characteristic", type=int, default=0)
    res.set_defaults(handler=cmd_resultant)

    errata = sub.add_parser("errata", help="Decide between the readings of inconsistent displays")
    errata.add_argument("--seed", type=int, default=settings.seed)
    errata.set_defaults(handler=cmd_errata)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    if args.command == "compose" and len(args.map) != 2:
        parser.error("compose needs exactly two --map options")
    if args.command == "resultant" and len(args.poly) != 2:
        parser.error("resultant needs exactly two --poly options")
    try:
        return args.handler(args)
    except (ParseError, ScenarioError, OSError, ValueError) as exc:
        logger.error("Bad input", command=args.command, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except AlgebraError as exc:
        logger.error("Computation failed", command=args.command, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
