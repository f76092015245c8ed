from __future__ import annotations

import argparse
import sys

from pydantic import ValidationError

from qcal.cli.common import (
    ExitCode,
    add_evaluation_arguments,
    complex_pair,
    eval_config,
    evaluate_point,
    failure_message,
)


def _format_value(value: complex) -> str:
    real = format(value.real, "#.17g")
    if value.imag == 0:
        return real
    sign = "-" if value.imag < 0 else "+"
    return f"{real} {sign} {format(abs(value.imag), '#.17g')}i"


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        cfg = eval_config(args.method, args.rel_tol)
    except ValidationError as exc:
        print(f"qcal eval: {exc}", file=sys.stderr)
        return ExitCode.USAGE

    result = evaluate_point(args.function, args.z, args.q, cfg)
    if result.converged:
        print(f"value: {_format_value(complex(result.value))}")
    print(f"terms_used: {result.terms_used}")
    print(f"err_estimate: {result.err_estimate:.3e}")
    print(f"status: {result.status.value}")

    if not result.converged:
        print(f"qcal eval: {failure_message(result.status, args.z, args.q)}", file=sys.stderr)
        return ExitCode.MATH_DOMAIN
    return ExitCode.OK


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="evaluate a function at one point")
    add_evaluation_arguments(parser)
    parser.add_argument("--z", type=complex_pair, required=True, help="re[,im]")
    parser.set_defaults(handler=cmd_eval)
