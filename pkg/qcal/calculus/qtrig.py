from __future__ import annotations

import logging
import math
from collections.abc import Callable
from enum import Enum

from qcal.calculus.qexp import Eq_big, calE, eq
from qcal.schemas.evaluation import (
    EvalConfig,
    EvalResult,
    EvalStatus,
    QParam,
    Regime,
    TrigValue,
    as_qparam,
)

logger = logging.getLogger(__name__)

REALNESS_THRESHOLD = 1e-12
TAN_POLE_THRESHOLD = 1e-13

Exponential = Callable[[complex, QParam, EvalConfig | None], EvalResult]


class _Part(str, Enum):
    sine = "sine"
    cosine = "cosine"


def small_family_radius(q: QParam | float) -> float:
    """Domain |x| < 1/(1-q) of sin_q, cos_q and tan_q; unbounded for q >= 1."""
    qp = as_qparam(q)
    if qp.regime is Regime.SubOne:
        return 1.0 / (1.0 - qp.q)
    return math.inf


def big_family_radius(q: QParam | float) -> float:
    """Domain |x| < q/(q-1) of Sin_q, Cos_q and Tan_q; unbounded for q <= 1."""
    qp = as_qparam(q)
    if qp.regime is Regime.SuperOne:
        return qp.q / (qp.q - 1.0)
    return math.inf


def _failed(status: EvalStatus) -> TrigValue:
    return TrigValue(value=complex(math.nan, math.nan), status=status)


def as_trig_value(
    value: complex, x: complex, label: str, *, terms_used: int, err_estimate: float
) -> TrigValue:
    """
    Wrap a combination of exponentials. For real x the value is returned as a
    float when its imaginary residue is below REALNESS_THRESHOLD (1 + |value|);
    otherwise it stays complex and realness_warning is set.
    """
    diagnostics = {"terms_used": terms_used, "err_estimate": err_estimate}
    if complex(x).imag != 0:
        return TrigValue(value=value, status=EvalStatus.Converged, **diagnostics)

    residue = abs(value.imag)
    if residue <= REALNESS_THRESHOLD * (1.0 + abs(value.real)):
        return TrigValue(
            value=value.real, status=EvalStatus.Converged, imag_residue=residue, **diagnostics
        )

    logger.warning("%s(%s) has imaginary residue %.3g for a real argument", label, x, residue)
    return TrigValue(
        value=value,
        status=EvalStatus.Converged,
        imag_residue=residue,
        realness_warning=True,
        **diagnostics,
    )


def _combine(
    exponential: Exponential,
    part: _Part,
    x: complex,
    q: QParam | float,
    cfg: EvalConfig | None,
    *,
    radius: float,
    label: str,
) -> TrigValue:
    if abs(x) >= radius:
        return _failed(EvalStatus.OutsideDomain)

    qp = as_qparam(q)
    plus = exponential(1j * x, qp, cfg)
    if not plus.converged:
        return _failed(plus.status)
    minus = exponential(-1j * x, qp, cfg)
    if not minus.converged:
        return _failed(minus.status)

    if part is _Part.sine:
        value = (plus.value - minus.value) / 2j
    else:
        value = (plus.value + minus.value) / 2
    return as_trig_value(
        value,
        x,
        label,
        terms_used=plus.terms_used + minus.terms_used,
        err_estimate=max(plus.err_estimate, minus.err_estimate),
    )


def sin_q(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    return _combine(eq, _Part.sine, x, q, cfg, radius=small_family_radius(q), label="sin_q")


def cos_q(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    return _combine(eq, _Part.cosine, x, q, cfg, radius=small_family_radius(q), label="cos_q")


def Sin_q(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    return _combine(Eq_big, _Part.sine, x, q, cfg, radius=big_family_radius(q), label="Sin_q")


def Cos_q(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    return _combine(Eq_big, _Part.cosine, x, q, cfg, radius=big_family_radius(q), label="Cos_q")


def calSin(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    """(E(ix) - E(-ix)) / 2i with the improved exponential; real and bounded by 1 for real x."""
    return _combine(calE, _Part.sine, x, q, cfg, radius=math.inf, label="calSin")


def calCos(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    return _combine(calE, _Part.cosine, x, q, cfg, radius=math.inf, label="calCos")


def _quotient(numerator: TrigValue, denominator: TrigValue, x: complex, label: str) -> TrigValue:
    if not numerator.converged:
        return _failed(numerator.status)
    if not denominator.converged:
        return _failed(denominator.status)
    if abs(denominator.value) < TAN_POLE_THRESHOLD:
        logger.debug("%s has a pole near x=%s", label, x)
        return _failed(EvalStatus.Pole)
    ratio = complex(numerator.value) / complex(denominator.value)
    return as_trig_value(
        ratio,
        x,
        label,
        terms_used=numerator.terms_used + denominator.terms_used,
        err_estimate=(numerator.err_estimate + abs(ratio) * denominator.err_estimate)
        / abs(denominator.value),
    )


def tan_q(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    return _quotient(sin_q(x, q, cfg), cos_q(x, q, cfg), x, "tan_q")


def Tan_q(x: complex, q: QParam | float, cfg: EvalConfig | None = None) -> TrigValue:
    """Sin_q / Cos_q; coincides with tan_q on the common domain."""
    return _quotient(Sin_q(x, q, cfg), Cos_q(x, q, cfg), x, "Tan_q")
