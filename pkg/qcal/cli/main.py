from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from qcal.cli.commands import check, evaluate, radius, sweep
from qcal.cli.common import ExitCode
from qcal.core.config import settings

COMMANDS = (evaluate, sweep, check, radius)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcal", description="q-exponentials, q-trigonometric functions and identity checks"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level: int | str = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = settings.QCAL_LOG_LEVEL.upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 on --help
        return ExitCode.USAGE if exc.code else ExitCode.OK

    configure_logging(args.verbose)
    return int(args.handler(args))


if __name__ == "__main__":
    sys.exit(main())
