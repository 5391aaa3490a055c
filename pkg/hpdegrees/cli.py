"""Command line: check, table, phi, residues, verify, serve.

Data goes to stdout (or --out FILE), diagnostics to stderr.
Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from hpdegrees.config import LOG_LEVELS, OUTPUT_FORMATS, configure_logging, settings
from hpdegrees.errors import FormulaMismatch, HPDegreesError
from hpdegrees.models import ReportConfig, Suite
from hpdegrees.services import report, verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _common_options(defaults: bool) -> argparse.ArgumentParser:
    # Accepted before or after the verb; only the top-level parser sets defaults.
    def default(value):
        return value if defaults else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=default(settings.output_format))
    common.add_argument("--pmax", type=int, default=default(settings.pmax), help="largest prime in tables")
    common.add_argument("--nmax", type=int, default=default(settings.nmax), help="largest level in tables")
    common.add_argument(
        "--scan-guard", type=int, default=default(settings.scan_guard), help="max residue classes per scan"
    )
    common.add_argument("--jobs", type=int, default=default(settings.jobs), help="worker processes for scans")
    common.add_argument("--out", type=Path, default=default(None), help="write data to FILE instead of stdout")
    common.add_argument(
        "--log-level", type=str.upper, choices=LOG_LEVELS, default=default(settings.log_level.upper())
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpdegrees",
        description="Degrees of self maps of quaternionic projective spaces.",
        parents=[_common_options(defaults=True)],
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    common = _common_options(defaults=False)

    check = sub.add_parser("check", parents=[common], help="membership of k in FG_n with evidence")
    check.add_argument("k", help='integer or rational "a/b"')
    check.add_argument("--n", type=int, required=True)
    check.add_argument("--p", type=int, help="decide p-locally only")

    sub.add_parser("table", parents=[common], help="e(p,n), f(p,n) and proof status for p <= pmax, n <= nmax")

    phi = sub.add_parser("phi", parents=[common], help="the Adams-commuting endomorphism with phi(x) = kx + ...")
    phi.add_argument("k")
    phi.add_argument("--n", type=int, required=True)

    residues = sub.add_parser("residues", parents=[common], help="residues of FG_n modulo M")
    residues.add_argument("--n", type=int, required=True)
    residues.add_argument("--modulus", type=int, help="defaults to the least sound modulus")

    verify_cmd = sub.add_parser("verify", parents=[common], help="run verification suites")
    verify_cmd.add_argument("suite", nargs="?", choices=[s.value for s in Suite], default=Suite.all.value)

    serve = sub.add_parser("serve", parents=[common], help="run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _config(args: argparse.Namespace) -> ReportConfig:
    return ReportConfig(
        output_format=args.format,
        pmax=args.pmax,
        nmax=args.nmax,
        scan_guard=args.scan_guard,
        jobs=args.jobs,
        ktheory_check_bound=settings.ktheory_check_bound,
    )


def _run(args: argparse.Namespace, config: ReportConfig) -> tuple[str, int]:
    fmt = config.output_format
    if args.verb == "check":
        verdict = report.cmd_check(args.k, args.n, args.p, config)
        return report.render_verdict(verdict, fmt), EXIT_OK
    if args.verb == "table":
        return report.render_table(report.cmd_table(config.pmax, config.nmax), fmt), EXIT_OK
    if args.verb == "phi":
        return report.render_endo(report.cmd_phi(args.k, args.n), fmt), EXIT_OK
    if args.verb == "residues":
        return report.render_residues(report.cmd_residues(args.n, args.modulus, config), fmt), EXIT_OK
    if args.verb == "verify":
        outcomes = verify.cmd_verify(Suite(args.suite), config)
        code = EXIT_OK if all(o.ok for o in outcomes) else EXIT_VERIFY_FAILED
        return report.render_outcomes(outcomes, fmt), code
    raise ValueError(f"unknown verb {args.verb}")


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    configure_logging(args.log_level)

    if args.verb == "serve":
        import uvicorn

        uvicorn.run("hpdegrees.main:app", host=args.host, port=args.port)
        return EXIT_OK

    try:
        config = _config(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        text, code = _run(args, config)
    except FormulaMismatch as exc:
        logger.error("Formula mismatch: %s", exc)
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except (HPDegreesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    _emit(text, args.out)
    return code
