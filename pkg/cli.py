"""
subdiv-repro command line.

Subcommands: analyze, oracle, scheme, subdivide, render. Reports go to stdout,
logs to stderr. Exit codes: 0 success, 1 usage or parse error, 2 invariant
violation in the input, 3 disagreement between independent checks.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from analysis import analyze, reproduction_degree
from config import DEFAULT_CAP, configure_logging
from engine import (
    GridData,
    box_is_empty,
    cascade,
    centered_box,
    default_oracle_radius,
    delta_grid,
    grid_from_values,
    monomials_up_to,
    stepwise_oracle,
    subdivide_once,
)
from errors import (
    CrossCheckError,
    DataParseError,
    EmptyTrustedRegionError,
    MaskValidationError,
    SubdivisionError,
)
from mask import Mask, dumps_mask, format_rational, parse_rational, read_mask
from response_helpers import grid_to_csv, grid_to_pgm, render_analysis_text, render_oracle_text
from schemes import SCHEMES, get_scheme, scheme_notes

logger = logging.getLogger("subdiv-repro")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CROSS_CHECK = 3


class _ArgumentParser(argparse.ArgumentParser):
    """argparse reports usage errors with exit status 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value

    return parse


# ============================================================================
# INPUTS
# ============================================================================

def _load_mask(args: argparse.Namespace) -> tuple[Mask, list[str]]:
    if args.scheme:
        return get_scheme(args.scheme), scheme_notes(args.scheme)
    return read_mask(args.mask), []


def read_data_csv(text: str, dimension: int, source: str = "data") -> GridData:
    """Rows `i_1,...,i_s,value`; blank lines and `#` comments are skipped"""
    values = {}
    lines = [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    for (number, _), row in zip(lines, csv.reader(line for _, line in lines)):
        if len(row) != dimension + 1:
            raise DataParseError(
                f"{source}: line {number}: expected {dimension + 1} fields, got {len(row)}"
            )
        try:
            index = tuple(int(field) for field in row[:-1])
            value = parse_rational(row[-1])
        except ValueError as exc:
            raise DataParseError(f"{source}: line {number}: {exc}") from exc
        if index in values:
            raise DataParseError(f"{source}: line {number}: duplicate index {list(index)}")
        values[index] = value
    if not values:
        raise DataParseError(f"{source}: no data rows")
    return grid_from_values(dimension, values)


def _write_text(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_analyze(args: argparse.Namespace) -> int:
    mask, notes = _load_mask(args)
    report = analyze(mask, args.cap, cross_check=not args.no_cross_check, extra_notes=notes)
    if args.format == "json":
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(render_analysis_text(report))
    if not report.cross_checks_passed:
        failed = [check.name for check in report.cross_checks if not check.passed]
        raise CrossCheckError(f"equivalent formulations disagree: {', '.join(failed)}")
    return EXIT_OK


def _oracle_disagreements(reports, certified: Optional[int], cap: int, steps: int) -> list[str]:
    problems = []
    limit = certified if certified is not None else -1
    for report in reports:
        if report.degree <= limit and not report.passed:
            problems.append(
                f"level {report.level}: {report.polynomial} fails although degree {limit} is certified"
            )
    if limit < cap:
        for level in range(steps + 1):
            next_degree = [r for r in reports if r.level == level and r.degree == limit + 1]
            if next_degree and all(r.passed for r in next_degree):
                problems.append(
                    f"level {level}: every monomial of degree {limit + 1} passes "
                    f"although reproduction of that degree is refuted"
                )
    return problems


def cmd_oracle(args: argparse.Namespace) -> int:
    mask, _ = _load_mask(args)
    reproduction = reproduction_degree(mask, args.cap)
    tau = reproduction.tau_values()
    if tau is None:
        logger.warning("sum rules of order 1 fail; running the oracle with tau = 0")
        tau = (0,) * mask.dimension
    radius = args.radius or default_oracle_radius(mask)
    box = centered_box(mask.dimension, radius)

    reports = []
    for level in range(args.steps + 1):
        for poly in monomials_up_to(mask.dimension, args.degree):
            report = stepwise_oracle(mask, poly, tau, level, box)
            if not report.covers_cosets:
                raise EmptyTrustedRegionError(
                    f"trusted region misses a residue class mod {mask.modulus} at radius {radius}; "
                    f"use --radius {default_oracle_radius(mask)} or larger"
                )
            reports.append(report)

    problems = _oracle_disagreements(reports, reproduction.degree, args.cap, args.steps)
    if args.format == "json":
        payload = {
            "name": mask.name,
            "tau": [format_rational(t) for t in tau],
            "certified_degree": reproduction.degree,
            "agrees": not problems,
            "reports": [report.model_dump() for report in reports],
        }
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(render_oracle_text(mask.name, tau, reports, reproduction.degree))
    if problems:
        raise CrossCheckError("; ".join(problems))
    return EXIT_OK


def cmd_scheme(args: argparse.Namespace) -> int:
    if args.list:
        for name, info in SCHEMES.items():
            sys.stdout.write(f"{name:<24} {info.description}\n")
        return EXIT_OK
    _write_text(dumps_mask(get_scheme(args.name)), args.output)
    return EXIT_OK


def cmd_subdivide(args: argparse.Namespace) -> int:
    mask, _ = _load_mask(args)
    if args.delta:
        grid = delta_grid(mask.dimension)
    else:
        grid = read_data_csv(Path(args.data).read_text(encoding="utf-8"), mask.dimension, args.data)
    for _ in range(args.steps):
        grid = subdivide_once(mask, grid)
    if box_is_empty(grid.trusted):
        logger.warning("no output value is stencil-complete; the trusted region is empty")
    _write_text(grid_to_csv(grid), args.output)
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    mask, _ = _load_mask(args)
    if args.image and mask.dimension != 2:
        raise DataParseError(f"--image needs a bivariate mask, got dimension {mask.dimension}")
    grid = cascade(mask, args.steps)
    expected = mask.symbol.value_at_one() ** args.steps
    footer = f"sum={format_rational(grid.total())} expected={format_rational(expected)}"
    _write_text(grid_to_csv(grid, footer), args.output)
    if args.image:
        Path(args.image).write_bytes(grid_to_pgm(grid))
        logger.info(f"Wrote {args.image}")
    if grid.total() != expected:
        raise CrossCheckError(f"cascade total {grid.total()} differs from a(1)^r = {expected}")
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def _add_mask_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("mask", nargs="?", help="Mask document (JSON)")
    parser.add_argument("--scheme", help="Use a built-in scheme instead of a mask file")


def _add_cap(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--cap",
        type=_int_at_least(0),
        default=DEFAULT_CAP,
        help=f"Degree-search cap (default: {DEFAULT_CAP})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="subdiv-repro",
        description="Polynomial generation and reproduction of subdivision schemes with dilation mI",
    )
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze_parser = commands.add_parser("analyze", help="Certify generation and reproduction degrees")
    _add_mask_source(analyze_parser)
    _add_cap(analyze_parser)
    analyze_parser.add_argument("--format", choices=["text", "json"], default="text")
    analyze_parser.add_argument(
        "--no-cross-check", action="store_true", help="Skip the equivalent-formulation checks"
    )
    analyze_parser.set_defaults(handler=cmd_analyze, needs_mask=True)

    oracle_parser = commands.add_parser("oracle", help="Run the step-wise reproduction oracle")
    _add_mask_source(oracle_parser)
    oracle_parser.add_argument("--degree", type=_int_at_least(0), required=True)
    oracle_parser.add_argument("--steps", type=_int_at_least(0), default=0, help="Highest level r")
    oracle_parser.add_argument("--radius", type=_int_at_least(1), default=None)
    _add_cap(oracle_parser)
    oracle_parser.add_argument("--format", choices=["text", "json"], default="text")
    oracle_parser.set_defaults(handler=cmd_oracle, needs_mask=True)

    scheme_parser = commands.add_parser("scheme", help="Emit a built-in scheme as a mask document")
    scheme_parser.add_argument("name", nargs="?")
    scheme_parser.add_argument("--output", help="Write to a file instead of stdout")
    scheme_parser.add_argument("--list", action="store_true", help="List built-in schemes")
    scheme_parser.set_defaults(handler=cmd_scheme, needs_mask=False)

    subdivide_parser = commands.add_parser("subdivide", help="Apply the subdivision operator to data")
    _add_mask_source(subdivide_parser)
    data = subdivide_parser.add_mutually_exclusive_group(required=True)
    data.add_argument("--data", help="CSV rows i_1,...,i_s,value")
    data.add_argument("--delta", action="store_true", help="Start from delta data")
    subdivide_parser.add_argument("--steps", type=_int_at_least(0), default=1)
    subdivide_parser.add_argument("--output")
    subdivide_parser.set_defaults(handler=cmd_subdivide, needs_mask=True)

    render_parser = commands.add_parser("render", help="Cascade from delta data and export the grid")
    _add_mask_source(render_parser)
    render_parser.add_argument("--steps", type=_int_at_least(0), default=4)
    render_parser.add_argument("--output", help="CSV path (default: stdout)")
    render_parser.add_argument("--image", help="PGM raster path (bivariate masks only)")
    render_parser.set_defaults(handler=cmd_render, needs_mask=True)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.needs_mask and bool(args.mask) == bool(args.scheme):
        parser.error("give exactly one of a mask file or --scheme NAME")
    if args.command == "scheme" and not (args.list or args.name):
        parser.error("scheme: give a scheme NAME or --list")
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except MaskValidationError as exc:
        logger.error(f"invalid mask: {exc}")
        return EXIT_INVALID
    except CrossCheckError as exc:
        logger.error(f"cross-check failed: {exc}")
        return EXIT_CROSS_CHECK
    except (SubdivisionError, OSError) as exc:
        logger.error(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
