from __future__ import annotations

import argparse
import logging
import sys

from qcal.calculus.qverify import run_all
from qcal.cli.common import ExitCode, positive_float
from qcal.core.errors import UnknownIdentityError
from qcal.schemas.verification import CheckReport, IdentityReport

logger = logging.getLogger(__name__)


def tolerance_override(text: str) -> tuple[str, float]:
    name, separator, value = text.partition("=")
    if not separator or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got '{text}'")
    return name, positive_float(value)


def format_text(reports: list[IdentityReport]) -> str:
    return "\n".join(
        f"{report.id:<24} {report.max_residual:.3e} {'PASS' if report.passed else 'FAIL'}"
        for report in reports
    )


def format_json(reports: list[IdentityReport]) -> str:
    return CheckReport(reports=reports).model_dump_json(by_alias=True, indent=2)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        reports = run_all(dict(args.tol), seed=args.seed, points=args.points)
    except UnknownIdentityError as exc:
        print(f"qcal check: {exc}", file=sys.stderr)
        return ExitCode.USAGE

    print(format_json(reports) if args.format == "json" else format_text(reports))

    failed = [report.id for report in reports if not report.passed]
    if failed:
        logger.warning("%d of %d identities failed: %s", len(failed), len(reports), ", ".join(failed))
        return ExitCode.MATH_DOMAIN
    logger.info("all %d identities passed", len(reports))
    return ExitCode.OK


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("check", help="verify the identity registry")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument(
        "--tol",
        type=tolerance_override,
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override one identity's tolerance; repeatable",
    )
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--points", type=int, default=None, help="samples per identity")
    parser.set_defaults(handler=cmd_check)
