#!/usr/bin/env python3
"""
cli.py — Command-line front end for the dihedral realizability engine.

Commands: classify, residues, surface-check, witness, crosscheck, enumerate.
Exit status: 0 when the command ran (the verdict is in the report),
2 for usage, parse and file-format errors, 3 when an internal inconsistency is detected.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from config import Settings, get_settings
from deciders import verdicts as V
from engine.angles import AngleDistribution, parse_angle_list, parse_exact
from engine.run_logger import RunLogger
from engine.strata import (
    AbelianResidueConfig,
    AbelianStratum,
    QuadraticStratum,
    QuadResidueConfig,
    abelian_residues_realizable,
    quad_residues_realizable,
)
from errors import InconsistencyError, ParseError
from generators.surface_analyzer import analyze, canonical_form, to_distribution, validate
from models import SearchBounds, SurfaceBounds
from orchestrator import ClassificationOrchestrator
from utils import report_io
from utils.surface_io import dump_surface, load_surface

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3

UNIT_FACTORS = {"pi": Fraction(1, 2), "2pi": Fraction(1), "deg": Fraction(1, 360)}


# ── Argument parsing ───────────────────────────────────────────


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("human", "structured"), default="human", help="Report format")
    parser.add_argument("--jobs", type=int, default=None, help="Worker threads (default: settings)")
    parser.add_argument("--log-level", default=None, help="Console log level (default: settings)")


def _add_angles(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--genus", type=int, required=True)
    parser.add_argument(
        "--class", dest="monodromy", required=True,
        choices=sorted(V.CLASS_ALIASES), help="Monodromy class",
    )
    parser.add_argument("--angles", required=True, help="Comma-separated exact angles, e.g. 3/2,3/2,3/4")
    parser.add_argument("--units", choices=sorted(UNIT_FACTORS), default="pi", help="Angle unit (default: pi)")
    parser.add_argument(
        "--gen", action="append", default=[], metavar="X",
        help="Declare a symbolic generator usable as p/q+r/s*X (repeatable)",
    )


def _add_bounds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-segments", type=int, default=None)
    parser.add_argument("--max-denominator", type=int, default=None)
    parser.add_argument("--max-regular", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli.py",
        description="Realizability of cone spherical metrics with dihedral monodromy.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    classify = commands.add_parser("classify", help="Run both decision paths on one distribution")
    _add_angles(classify)
    _add_bounds(classify)
    classify.add_argument("--witness", action="store_true", help="Search a witness surface when realizable")
    classify.add_argument("--compare", action="store_true", help="Also check the laws relating the classes")
    _add_common(classify)

    residues = commands.add_parser("residues", help="Query residue realizability on a stratum")
    residues.add_argument("--kind", choices=("quadratic", "abelian"), required=True)
    residues.add_argument("--genus", type=int, required=True)
    residues.add_argument("--orders", help="Quadratic: orders of zeros and simple poles (use --orders=-1,... for leading -1)")
    residues.add_argument("--zeros", help="Abelian: orders of the zeros")
    residues.add_argument("--residues", required=True, help="Residues at the poles")
    residues.add_argument("--gen", action="append", default=[], metavar="X")
    _add_common(residues)

    check = commands.add_parser("surface-check", help="Validate and analyze a surface file")
    check.add_argument("file", type=Path)
    _add_common(check)

    witness = commands.add_parser("witness", help="Search a hemispherical witness surface")
    _add_angles(witness)
    _add_bounds(witness)
    witness.add_argument("--out", type=Path, default=None, help="Write the witness surface file here")
    _add_common(witness)

    crosscheck = commands.add_parser("crosscheck", help="Compare the decision paths over a grid")
    crosscheck.add_argument("--coefficients", default=None, help="Comma-separated turn coefficients")
    crosscheck.add_argument("--max-n", type=int, default=None)
    crosscheck.add_argument("--max-genus", type=int, default=None)
    crosscheck.add_argument("--oracle", action="store_true", help="Also run the witness search in genus zero")
    crosscheck.add_argument("--csv", type=Path, default=None, help="Write the full table as CSV")
    _add_bounds(crosscheck)
    _add_common(crosscheck)

    enumerate_ = commands.add_parser("enumerate", help="Stream canonical surfaces within bounds")
    enumerate_.add_argument("--max-segments", type=int, required=True)
    enumerate_.add_argument("--max-length", type=int, default=None)
    enumerate_.add_argument("--denominator", type=int, default=None)
    enumerate_.add_argument("--circumferences", default=None, help="Allowed circumferences (turn units)")
    enumerate_.add_argument("--summary", action="store_true", help="Print counts instead of surfaces")
    _add_common(enumerate_)

    return parser


# ── Input helpers ──────────────────────────────────────────────


def _int_list(text: str) -> List[int]:
    values: List[int] = []
    offset = 0
    for chunk in text.split(","):
        try:
            values.append(int(chunk.strip()))
        except ValueError:
            raise ParseError("expected an integer", text, offset) from None
        offset += len(chunk) + 1
    return values


def _exact_list(text: str, generators: Sequence[str] = ()):
    values = []
    offset = 0
    for chunk in text.split(","):
        try:
            values.append(parse_exact(chunk, generators))
        except ParseError as e:
            raise ParseError(e.message, text, offset + (e.position or 0)) from e
        offset += len(chunk) + 1
    return values


def _distribution(args: argparse.Namespace) -> AngleDistribution:
    angles = parse_angle_list(args.angles, args.gen, UNIT_FACTORS[args.units])
    return AngleDistribution(args.genus, tuple(angles))


def _search_bounds(args: argparse.Namespace, settings: Settings) -> SearchBounds:
    return SearchBounds(
        max_segments=args.max_segments if args.max_segments is not None else settings.max_segments,
        max_denominator=args.max_denominator if args.max_denominator is not None else settings.max_denominator,
        max_regular=args.max_regular if args.max_regular is not None else settings.max_regular,
    )


def _settings_for(args: argparse.Namespace) -> Settings:
    settings = get_settings()
    update = {}
    if args.jobs is not None:
        update["jobs"] = args.jobs
    if args.log_level is not None:
        update["log_level"] = args.log_level.upper()
    return settings.model_copy(update=update) if update else settings


# ── Commands ───────────────────────────────────────────────────


def run_classify(args: argparse.Namespace, orchestrator: ClassificationOrchestrator, settings: Settings) -> int:
    dist = _distribution(args)
    report = orchestrator.classify(dist, args.monodromy, args.witness, _search_bounds(args, settings))
    comparison = orchestrator.compare(dist) if args.compare else None
    if args.format == "structured":
        sections = {"report": report}
        if comparison is not None:
            sections["comparison"] = comparison
        print(report_io.structured("classify", **sections))
    else:
        print(report_io.render_classification(report))
        if comparison is not None:
            print(report_io.render_comparison(comparison))
    return EXIT_INCONSISTENT if report.divergence == V.UNEXPLAINED else EXIT_OK


def run_residues(args: argparse.Namespace) -> int:
    if args.kind == "quadratic":
        if args.orders is None:
            raise ParseError("--orders is required for quadratic strata")
        values = _exact_list(args.residues)
        if any(not v.is_rational for v in values):
            raise ParseError("quadratic residues must be rational", args.residues)
        stratum = QuadraticStratum.from_orders(args.genus, _int_list(args.orders), len(values))
        verdict = quad_residues_realizable(stratum, QuadResidueConfig.from_residues(v.turn for v in values))
    else:
        if args.zeros is None:
            raise ParseError("--zeros is required for Abelian strata")
        values = _exact_list(args.residues, args.gen)
        stratum = AbelianStratum.from_zeros(args.genus, _int_list(args.zeros), len(values))
        verdict = abelian_residues_realizable(stratum, AbelianResidueConfig.from_signed(values))

    if args.format == "structured":
        print(report_io.structured(
            "residues", stratum=str(stratum), residues=[str(v) for v in values], verdict=verdict,
        ))
    else:
        print(f"{stratum} residues ({','.join(str(v) for v in values)}): {report_io.render_strata(verdict)}")
    return EXIT_OK


def run_surface_check(args: argparse.Namespace) -> int:
    surface = load_surface(args.file)
    issues = validate(surface)
    report = None if issues else analyze(surface)
    dist = None if issues else to_distribution(surface, drop_regular=True)
    if args.format == "structured":
        print(report_io.structured(
            "surface-check",
            valid=not issues,
            issues=issues,
            report=report,
            distribution=str(dist) if dist is not None else None,
            canonical=None if issues else canonical_form(surface),
        ))
    else:
        print(report_io.render_surface(report, issues))
        if report is not None:
            print(f"  distribution: {dist if dist is not None else 'round sphere (no singularities)'}")
    return EXIT_OK


def run_witness(args: argparse.Namespace, orchestrator: ClassificationOrchestrator, settings: Settings) -> int:
    dist = _distribution(args)
    outcome = orchestrator.witness(dist, args.monodromy, _search_bounds(args, settings))
    if outcome.witness is not None and args.out is not None:
        dump_surface(outcome.witness, args.out)
    if args.format == "structured":
        print(report_io.structured("witness", distribution=str(dist), outcome=outcome))
    else:
        print(f"{dist}: {report_io.render_outcome(outcome)}")
        if outcome.witness is not None:
            print(dump_surface(outcome.witness))
    return EXIT_OK


def run_crosscheck(args: argparse.Namespace, orchestrator: ClassificationOrchestrator, settings: Settings) -> int:
    coefficients = [c.strip() for c in args.coefficients.split(",")] if args.coefficients else None
    frame = orchestrator.crosscheck(
        coefficients, args.max_n, args.max_genus, args.oracle, _search_bounds(args, settings)
    )
    if args.csv is not None:
        frame.to_csv(args.csv, index=False)

    divergent = frame[frame["divergence"].notna()]
    disagreeing = frame[frame["oracle_agrees"] == False]
    if args.format == "structured":
        print(report_io.structured(
            "crosscheck",
            rows=len(frame),
            divergences=json.loads(divergent.to_json(orient="records")),
            oracle_disagreements=json.loads(disagreeing.to_json(orient="records")),
            counts={str(k): int(v) for k, v in divergent["divergence"].value_counts().items()},
        ))
    else:
        print(f"{len(frame)} rows, {len(divergent)} divergent, {len(disagreeing)} oracle disagreement(s)")
        if len(divergent):
            print(divergent[["genus", "turns", "monodromy", "literal", "reduction", "divergence",
                             "literal_certificate", "reduction_certificate"]].to_string(index=False))
        if len(disagreeing):
            print(disagreeing.to_string(index=False))

    failed = (frame["divergence"] == V.UNEXPLAINED).any() or len(disagreeing) > 0
    return EXIT_INCONSISTENT if failed else EXIT_OK


def run_enumerate(args: argparse.Namespace, orchestrator: ClassificationOrchestrator, settings: Settings) -> int:
    bounds = SurfaceBounds(
        max_segments=args.max_segments,
        max_length=args.max_length if args.max_length is not None else settings.enumerate_max_length,
        denominator=args.denominator if args.denominator is not None else settings.enumerate_denominator,
        circumferences=[v.rational() for v in _exact_list(args.circumferences)] if args.circumferences else None,
    )
    if args.summary:
        frame = orchestrator.census(bounds)
        if args.format == "structured":
            print(report_io.structured(
                "enumerate", bounds=bounds, census=json.loads(frame.to_json(orient="records")),
            ))
        else:
            print(frame.to_string(index=False))
        return EXIT_OK

    if args.format == "structured":
        surfaces = list(orchestrator.enumerate(bounds))
        print(report_io.structured("enumerate", bounds=bounds, count=len(surfaces), surfaces=surfaces))
    else:
        for surface in orchestrator.enumerate(bounds):
            print(surface.model_dump_json())
    return EXIT_OK


# ── Entry point ────────────────────────────────────────────────


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = _settings_for(args)
    RunLogger.configure(settings)
    log = RunLogger("CLI", settings)
    orchestrator = ClassificationOrchestrator(settings)

    try:
        if args.command == "classify":
            return run_classify(args, orchestrator, settings)
        if args.command == "residues":
            return run_residues(args)
        if args.command == "surface-check":
            return run_surface_check(args)
        if args.command == "witness":
            return run_witness(args, orchestrator, settings)
        if args.command == "crosscheck":
            return run_crosscheck(args, orchestrator, settings)
        return run_enumerate(args, orchestrator, settings)
    except InconsistencyError as e:
        log.error(str(e))
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ValueError as e:
        # parse, angle, strata, surface-file and bounds errors all subclass ValueError
        log.debug(f"{args.command} rejected its input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
