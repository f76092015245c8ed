from __future__ import annotations

import argparse
import math
from collections.abc import Callable
from enum import IntEnum

from qcal.calculus import qexp, qtrig
from qcal.schemas.evaluation import EvalConfig, EvalMethod, EvalResult, EvalStatus, TrigValue
from qcal.schemas.sweep import SweepFunction


class ExitCode(IntEnum):
    OK = 0
    MATH_DOMAIN = 1
    USAGE = 2
    PARTIAL_SWEEP = 3
    IO_ERROR = 4


Evaluation = EvalResult | TrigValue

FUNCTIONS: dict[SweepFunction, Callable[..., Evaluation]] = {
    SweepFunction.eq: qexp.eq,
    SweepFunction.Eq: qexp.Eq_big,
    SweepFunction.calE: qexp.calE,
    SweepFunction.sin_q: qtrig.sin_q,
    SweepFunction.cos_q: qtrig.cos_q,
    SweepFunction.Sin_q: qtrig.Sin_q,
    SweepFunction.Cos_q: qtrig.Cos_q,
    SweepFunction.tan_q: qtrig.tan_q,
    SweepFunction.Tan_q: qtrig.Tan_q,
    SweepFunction.calSin: qtrig.calSin,
    SweepFunction.calCos: qtrig.calCos,
}


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: '{text}'") from exc
    if not math.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return value


def complex_pair(text: str) -> complex:
    """Parse `re` or `re,im`."""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected re[,im], got '{text}'")
    try:
        numbers = [float(part) for part in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected re[,im], got '{text}'") from exc
    return complex(numbers[0], numbers[1] if len(numbers) == 2 else 0.0)


def add_evaluation_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("function", choices=[function.value for function in SweepFunction])
    parser.add_argument("--q", type=positive_float, required=True)
    parser.add_argument(
        "--method",
        choices=[method.value for method in EvalMethod],
        default=EvalMethod.Auto.value,
    )
    parser.add_argument("--rel-tol", dest="rel_tol", type=positive_float, default=None)


def eval_config(method: EvalMethod | str, rel_tol: float | None) -> EvalConfig:
    if rel_tol is None:
        return EvalConfig(method=method)
    return EvalConfig(method=method, rel_tol=rel_tol)


def evaluate_point(
    function: SweepFunction | str, z: complex, q: float, cfg: EvalConfig
) -> Evaluation:
    return FUNCTIONS[SweepFunction(function)](z, q, cfg)


def format_arg(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}i"


def failure_message(status: EvalStatus, z: complex, q: float) -> str:
    if status is EvalStatus.Pole:
        return f"pole at z = {format_arg(z)}"
    if status is EvalStatus.OutsideDomain:
        return f"z = {format_arg(z)} is outside the domain for q = {q:g}"
    return f"no convergence at z = {format_arg(z)} within the term cap"
