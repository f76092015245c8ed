from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import sys
from collections.abc import Iterator
from typing import TextIO

import numpy
from pydantic import ValidationError

from qcal.cli.common import ExitCode, add_evaluation_arguments, eval_config, evaluate_point
from qcal.schemas.evaluation import EvalStatus
from qcal.schemas.sweep import SweepRow, SweepSpec, SweepVariable

logger = logging.getLogger(__name__)

HEADER = ("x", "value_re", "value_im", "terms", "err_estimate", "status")


def sweep_rows(spec: SweepSpec) -> Iterator[SweepRow]:
    """Rows on the uniform grid start..stop, in grid order."""
    cfg = eval_config(spec.method, spec.rel_tol)
    for point in numpy.linspace(spec.start, spec.stop, spec.steps):
        x = float(point)
        result = evaluate_point(spec.function, spec.argument(x), spec.q, cfg)
        yield SweepRow(
            x=x,
            value=complex(result.value) if result.converged else None,
            terms=result.terms_used,
            err_estimate=result.err_estimate,
            status=result.status,
        )


def _csv_fields(row: SweepRow) -> list[str]:
    # repr is the shortest string that round-trips the double
    if row.value is None:
        value_re = value_im = ""
    else:
        value_re, value_im = repr(row.value.real), repr(row.value.imag)
    return [
        repr(row.x),
        value_re,
        value_im,
        str(row.terms),
        repr(row.err_estimate),
        row.status.value,
    ]


@contextlib.contextmanager
def _open_output(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def write_sweep(spec: SweepSpec, out_path: str) -> int:
    """Write the sweep CSV; returns how many rows did not converge."""
    failures = 0
    with _open_output(out_path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(HEADER)
        for row in sweep_rows(spec):
            if row.status is not EvalStatus.Converged:
                failures += 1
            writer.writerow(_csv_fields(row))
    return failures


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        spec = SweepSpec(
            function=args.function,
            q=args.q,
            var=args.var,
            start=args.start,
            stop=args.stop,
            steps=args.steps,
            method=args.method,
            rel_tol=args.rel_tol,
        )
    except ValidationError as exc:
        print(f"qcal sweep: {exc}", file=sys.stderr)
        return ExitCode.USAGE

    try:
        failures = write_sweep(spec, args.out)
    except OSError as exc:
        print(f"qcal sweep: cannot write {args.out}: {exc}", file=sys.stderr)
        return ExitCode.IO_ERROR

    if failures:
        logger.warning("%d of %d sweep rows did not converge", failures, spec.steps)
        return ExitCode.PARTIAL_SWEEP
    logger.info("sweep of %s wrote %d rows to %s", spec.function.value, spec.steps, args.out)
    return ExitCode.OK


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("sweep", help="evaluate a function on a grid and write CSV")
    add_evaluation_arguments(parser)
    parser.add_argument(
        "--var",
        choices=[variable.value for variable in SweepVariable],
        default=SweepVariable.x_real.value,
    )
    parser.add_argument("--start", type=float, required=True)
    parser.add_argument("--stop", type=float, required=True)
    parser.add_argument("--steps", type=int, required=True)
    parser.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    parser.set_defaults(handler=cmd_sweep)
