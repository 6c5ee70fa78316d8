"""
Command-line interface.

    python -m frobtrace trace --p 13 --e 1 --a 1 --b 1 --method all
    python -m frobtrace sweep --q 13,25,37 --curves 25 --seed 42
    python -m frobtrace identities --p 13 --e 1 --trials 50

Records go to stdout, diagnostics to stderr. Exit codes: 0 everything agrees,
1 a mathematical disagreement, 2 invalid input.
"""
import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from . import characters, charsums, hypergeo
from .charsums import GaussStrategy, GaussTable, build_gauss_table
from .config import get_settings, override_settings, tolerance_for
from .elliptic import (
    Curve,
    TraceMethod,
    TraceReport,
    random_curve,
    trace_report,
)
from .errors import FrobTraceError, RoundingFailure, TooLarge
from .field import FieldContext, build_field
from .utils.rng import stream, substream
from .utils.run_log import CheckKind, VerificationLog

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_USAGE = 2

# Largest q for which identity suites sweep every (m, n) pair instead of sampling.
FULL_SWEEP_MAX_Q = 64


class UsageError(FrobTraceError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    q_list: Tuple[int, ...]
    curves_per_q: int
    rng_seed: int
    output_format: str = "json"
    tolerance_override: Optional[float] = None
    jobs: int = 1
    timing: bool = False
    strategy: GaussStrategy = GaussStrategy.AUTO


# Helpers

def split_prime_power(q: int) -> Tuple[int, int]:
    """(p, e) with q = p^e, or UsageError."""
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise UsageError(f"q = {q} is not a prime power", hypothesis="q = p^e")
    (p, e), = factors.items()
    return int(p), int(e)


def sweep_fields(q_list: Sequence[int], q_min: Optional[int], q_max: Optional[int]) -> Tuple[int, ...]:
    """Explicit list, or every prime power q = 1 (mod 12) in [q_min, q_max]."""
    if q_list:
        chosen = list(q_list)
    elif q_min is not None and q_max is not None:
        chosen = [q for q in range(max(q_min, 2), q_max + 1) if q % 12 == 1 and len(factorint(q)) == 1]
    else:
        raise UsageError("give --q or both --q-min and --q-max", hypothesis="a field list is required")
    ceiling = get_settings().max_q
    for q in chosen:
        split_prime_power(q)
        if q % 12 != 1:
            raise UsageError(f"q = {q} is not 1 mod 12", hypothesis="every sweep field has q = 1 (mod 12)")
        if q > ceiling:
            raise TooLarge(f"q = {q} exceeds the maximum {ceiling}", hypothesis=f"q <= {ceiling}")
    return tuple(chosen)


def _parse_q_list(values: Optional[List[str]]) -> List[int]:
    out: List[int] = []
    for value in values or []:
        out.extend(int(v) for v in value.split(",") if v.strip())
    return out


def render_reports(reports: Sequence[TraceReport], output_format: str) -> str:
    """JSON lines, or CSV with a header in TraceReport.FIELDS order."""
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(TraceReport.FIELDS)
        for report in reports:
            row = report.to_dict()
            writer.writerow(["" if row[k] is None else row[k] for k in TraceReport.FIELDS])
        return buffer.getvalue()
    return "".join(json.dumps(report.to_dict()) + "\n" for report in reports)


def _methods(choice: str) -> Tuple[TraceMethod, ...]:
    if choice == "all":
        return tuple(TraceMethod)
    return (TraceMethod(choice),)


def _table(ctx: FieldContext, strategy: str) -> GaussTable:
    return build_gauss_table(ctx, GaussStrategy(strategy))


# Commands

def cmd_trace(args: argparse.Namespace) -> int:
    ctx = build_field(args.p, args.e)
    curve = Curve.from_indices(ctx, args.a, args.b)
    report = trace_report(curve, _table(ctx, args.strategy), _methods(args.method), args.tolerance)
    sys.stdout.write(render_reports([report], args.format))
    return EXIT_OK if report.agree else EXIT_DISAGREE


def _sweep_one(ctx: FieldContext, table: GaussTable, config: SweepConfig, index: int) -> TraceReport:
    curve = random_curve(ctx, substream(config.rng_seed, ctx.q, index))
    try:
        return trace_report(curve, table, tolerance=config.tolerance_override)
    except RoundingFailure as exc:
        logger.error("rounding failure for %r: %s", curve, exc)
        report = trace_report(curve, table, methods=(TraceMethod.ORACLE,))
        report.agree = False
        return report


def run_sweep(config: SweepConfig) -> Tuple[List[TraceReport], dict]:
    """All records in (q, curve_index) order plus the summary."""
    started = time.time()
    reports: List[TraceReport] = []
    for q in config.q_list:
        p, e = split_prime_power(q)
        ctx = build_field(p, e)
        table = build_gauss_table(ctx, config.strategy)
        with ThreadPoolExecutor(max_workers=max(1, config.jobs)) as pool:
            reports.extend(pool.map(lambda i: _sweep_one(ctx, table, config, i), range(config.curves_per_q)))
    residuals = [r for rep in reports for r in (rep.residual_thm1, rep.residual_thm2) if r is not None]
    summary = {
        "curves_tested": len(reports),
        "agreements": sum(1 for rep in reports if rep.agree),
        "max_residual": max(residuals) if residuals else 0.0,
        "elapsed": round(time.time() - started, 3) if config.timing else None,
    }
    return reports, summary


def cmd_sweep(args: argparse.Namespace) -> int:
    config = SweepConfig(
        q_list=sweep_fields(_parse_q_list(args.q), args.q_min, args.q_max),
        curves_per_q=args.curves,
        rng_seed=args.seed,
        output_format=args.format,
        tolerance_override=args.tolerance,
        jobs=args.jobs,
        timing=args.timing,
        strategy=GaussStrategy(args.strategy),
    )
    if config.curves_per_q < 0:
        raise UsageError("--curves must be >= 0", hypothesis="curves_per_q >= 0")
    reports, summary = run_sweep(config)
    sys.stdout.write(render_reports(reports, config.output_format))
    prefix = "# " if config.output_format == "csv" else ""
    sys.stdout.write(prefix + json.dumps({"summary": summary}) + "\n")
    return EXIT_OK if summary["agreements"] == summary["curves_tested"] else EXIT_DISAGREE


def run_identity_suite(ctx: FieldContext, trials: int, seed: int = 0,
                       table: Optional[GaussTable] = None) -> VerificationLog:
    """Every identity check applicable to this q, collected in a VerificationLog."""
    table = table or charsums.gauss_table_for(ctx)
    log = VerificationLog()
    q, n = ctx.q, ctx.q - 1
    tol = tolerance_for(q)
    rng = stream(seed, q)
    nonzero = [ctx.element(i) for i in range(1, q)]

    def timed(name: str, kind: CheckKind, compute: Callable[[], List[float]], detail: str = "") -> None:
        started = time.time()
        log.record(name, kind, q, compute(), tol, detail=detail, started=started)

    timed("orthogonality of T^m", CheckKind.CHARACTER,
          lambda: [abs(characters.orthogonality_sum(ctx, m) - (n if m == 0 else 0)) for m in range(n)])
    timed("indicator sum of theta", CheckKind.CHARACTER,
          lambda: [abs(characters.indicator_sum(ctx, v) - (q if v.index == 0 else 0)) for v in ctx.elements()])
    timed("theta expansion in Gauss sums", CheckKind.CHARACTER,
          lambda: [characters.theta_expansion_check(ctx, alpha, table).max_deviation for alpha in nonzero])

    if q <= get_settings().naive_cutoff:
        naive = build_gauss_table(ctx, GaussStrategy.NAIVE).values
        for strategy in (GaussStrategy.DFT, GaussStrategy.CHIRP_Z):
            other = build_gauss_table(ctx, strategy).values
            timed(f"gauss table naive vs {strategy.value}", CheckKind.GAUSS_SUM,
                  lambda other=other: list(np.abs(naive - other)))

    if q <= FULL_SWEEP_MAX_Q:
        pairs = [(m, k) for m in range(n) for k in range(n) if m != k]
    else:
        pairs = []
        while len(pairs) < trials:
            m, k = (int(v) for v in rng.integers(0, n, size=2))
            if m != k:
                pairs.append((m, k))
    timed("binomial via Gauss sums", CheckKind.JACOBI_SUM,
          lambda: [charsums.jacobi_gauss_check(ctx, m, k, table).deviation for m, k in pairs],
          detail=f"{len(pairs)} (m, n) pairs")

    if n % 2 == 0:
        timed("Davenport-Hasse m = 2", CheckKind.DAVENPORT_HASSE,
              lambda: [charsums.davenport_hasse_m2_check(ctx, k, table).deviation for k in range(n)])
    else:
        log.record("Davenport-Hasse m = 2", CheckKind.DAVENPORT_HASSE, q, [], tol, detail="requires q = 1 (mod 2)")
    if n % 3 == 0:
        timed("Davenport-Hasse m = 3", CheckKind.DAVENPORT_HASSE,
              lambda: [charsums.davenport_hasse_m3_check(ctx, k, table).deviation for k in range(n)])
    else:
        log.record("Davenport-Hasse m = 3", CheckKind.DAVENPORT_HASSE, q, [], tol, detail="requires q = 1 (mod 3)")
    for mdiv in (1, 2, 3, 4, 6):
        if n % mdiv == 0:
            timed(f"Davenport-Hasse general m = {mdiv}", CheckKind.DAVENPORT_HASSE,
                  lambda mdiv=mdiv: [charsums.davenport_hasse_check(ctx, mdiv, psi, table).deviation
                                     for psi in range(n)])

    def transformation_trials(check, exclude_one: bool) -> List[float]:
        deviations = []
        while len(deviations) < trials:
            a, b, c = (int(v) for v in rng.integers(0, n, size=3))
            x = ctx.element(int(rng.integers(1, q)))
            if exclude_one and x == ctx.one:
                continue
            deviations.append(check(ctx, a, b, c, x, table).deviation)
        return deviations

    if q > 2:
        timed("2F1 transformation x -> 1 - x", CheckKind.TRANSFORMATION,
              lambda: transformation_trials(hypergeo.transform_1_minus_x, exclude_one=True))
    timed("2F1 transformation x -> 1/x", CheckKind.TRANSFORMATION,
          lambda: transformation_trials(hypergeo.transform_1_over_x, exclude_one=False))

    for result in charsums.special_identities_report(ctx, table):
        if not result.applicable:
            log.record(result.name, CheckKind.SPECIAL, q, [], tol, detail=result.detail)
        else:
            log.record(result.name, CheckKind.SPECIAL, q, [result.deviation], tol,
                       detail=result.detail, informational=result.informational)
    return log


def _print_identity_text(ctx: FieldContext, log: VerificationLog, timing: bool = False) -> None:
    print("=" * 70)
    print(f" IDENTITY SUITE  F_{ctx.q}  (p = {ctx.p}, e = {ctx.e})")
    print("=" * 70)
    marks = {"passed": "✓ PASS", "failed": "✗ FAIL", "skipped": "- SKIP", "info": "i INFO"}
    for entry in log.entries:
        line = f"  {marks[entry.status.value]} | {entry.name:42s} | {entry.cases:6d} | {entry.max_deviation:.2e}"
        if timing and entry.execution_time_ms is not None:
            line += f" | {entry.execution_time_ms} ms"
        if entry.detail:
            line += f" | {entry.detail}"
        print(line)
    metrics = log.calculate_metrics()
    print("-" * 70)
    print(f"Passed: {metrics['passed']}/{metrics['passed'] + metrics['failed']}"
          f"  (skipped {metrics['skipped']}, informational {metrics['informational']})")
    print(f"Max deviation: {metrics['max_deviation']:.3e}  tolerance: {tolerance_for(ctx.q):.1e}")
    print("=" * 70)


def cmd_identities(args: argparse.Namespace) -> int:
    ctx = build_field(args.p, args.e)
    log = run_identity_suite(ctx, args.trials, args.seed, _table(ctx, args.strategy))
    if args.format == "json":
        for entry in log.entries:
            print(json.dumps(entry.to_dict(timing=args.timing)))
        print(json.dumps({"summary": log.calculate_metrics()}))
    else:
        _print_identity_text(ctx, log, args.timing)
    return EXIT_OK if log.all_passed() else EXIT_DISAGREE


# Entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobtrace", description=__doc__.split("\n\n")[0])
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    strategies = [s.value for s in GaussStrategy]

    trace = sub.add_parser("trace", help="trace of Frobenius of one curve")
    trace.add_argument("--p", type=int, required=True)
    trace.add_argument("--e", type=int, default=1)
    trace.add_argument("--a", type=int, required=True, help="element index of a")
    trace.add_argument("--b", type=int, required=True, help="element index of b")
    trace.add_argument("--method", choices=[m.value for m in TraceMethod] + ["all"], default="all")
    trace.add_argument("--format", choices=["json", "csv"], default="json")
    trace.add_argument("--strategy", choices=strategies, default="auto")
    trace.add_argument(
        "--tolerance", type=float, default=None,
        help="relative tolerance factor; checks allow tolerance * q",
    )
    trace.set_defaults(handler=cmd_trace)

    sweep = sub.add_parser("sweep", help="random curves, formulas against the point-count oracle")
    sweep.add_argument("--q", action="append", help="field sizes, comma separated or repeated")
    sweep.add_argument("--q-min", type=int)
    sweep.add_argument("--q-max", type=int)
    sweep.add_argument("--curves", type=int, default=25)
    sweep.add_argument("--seed", type=int, default=42)
    sweep.add_argument("--format", choices=["json", "csv"], default="json")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--timing", action="store_true", help="include elapsed seconds in the summary")
    sweep.add_argument("--strategy", choices=strategies, default="auto")
    sweep.add_argument(
        "--tolerance", type=float, default=None,
        help="relative tolerance factor; checks allow tolerance * q",
    )
    sweep.set_defaults(handler=cmd_sweep)

    identities = sub.add_parser("identities", help="character-sum and transformation identity suite")
    identities.add_argument("--p", type=int, required=True)
    identities.add_argument("--e", type=int, default=1)
    identities.add_argument("--trials", type=int, default=50)
    identities.add_argument("--seed", type=int, default=0)
    identities.add_argument("--format", choices=["text", "json"], default="text")
    identities.add_argument("--timing", action="store_true", help="report per-check execution time")
    identities.add_argument("--strategy", choices=strategies, default="auto")
    identities.add_argument(
        "--tolerance", type=float, default=None,
        help="relative tolerance factor; checks allow tolerance * q",
    )
    identities.set_defaults(handler=cmd_identities)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.tolerance is not None and (not math.isfinite(args.tolerance) or args.tolerance <= 0):
        print("error: --tolerance must be a positive number", file=sys.stderr)
        return EXIT_USAGE

    try:
        settings = get_settings()
        level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level, logging.WARNING)
        logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        if args.tolerance is not None:
            override_settings(tolerance=args.tolerance)
        return args.handler(args)
    except FrobTraceError as exc:
        print(f"error: {exc} [{exc.hypothesis}]", file=sys.stderr)
        return EXIT_USAGE
