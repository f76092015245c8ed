from __future__ import annotations

import cmath
import logging
import math
import sys
from collections.abc import Callable

from qcal.calculus.qcore import BracketKind, brace_bracket, q_bracket, q_factorial
from qcal.core.errors import QDomainError, QRangeError
from qcal.schemas.evaluation import (
    ABSOLUTE_FLOOR,
    ConvergenceDisc,
    EvalConfig,
    EvalMethod,
    EvalResult,
    EvalStatus,
    QParam,
    Regime,
    as_qparam,
)

logger = logging.getLogger(__name__)

AUTO_SERIES_FRACTION = 0.75
POLE_THRESHOLD = 1e-14
MACHINE_EPSILON = sys.float_info.epsilon

Evaluator = Callable[[complex, QParam, EvalConfig], EvalResult]

_UNDEFINED = complex(math.nan, math.nan)


def _refused(status: EvalStatus, terms_used: int = 0) -> EvalResult:
    return EvalResult(
        value=_UNDEFINED,
        terms_used=terms_used,
        err_estimate=math.inf,
        status=status,
        condition=math.inf,
    )


def _classical(z: complex) -> EvalResult:
    try:
        value = cmath.exp(z)
    except OverflowError:
        logger.warning("classical exponential overflows at z=%s", z)
        return _refused(EvalStatus.OutsideDomain)
    return EvalResult(value=value, terms_used=0, err_estimate=0.0, status=EvalStatus.Converged)


def radius_of_convergence(q: QParam | float) -> ConvergenceDisc:
    qp = as_qparam(q)
    if qp.regime is Regime.SubOne:
        radius = 2.0 / (1.0 - qp.q)
    elif qp.regime is Regime.SuperOne:
        radius = 2.0 * qp.q / (qp.q - 1.0)
    else:
        radius = math.inf
    return ConvergenceDisc(radius=radius, q=qp)


def _small_exp_radius(qp: QParam) -> float:
    # e_q has its poles on |z| >= 1/(1-q) for q < 1 and is entire otherwise
    if qp.regime is Regime.SubOne:
        return 1.0 / (1.0 - qp.q)
    return math.inf


def _sum_series(z: complex, bracket: Callable[[int], float], cfg: EvalConfig) -> EvalResult:
    """
    Sum z^n / (b_1 b_2 ... b_n) for an increasing bracket sequence b_n.

    Stops once the geometric bound on the remaining terms drops below
    rel_tol relative to the partial sum.
    """
    total = 1.0 + 0j
    term = 1.0 + 0j
    abs_sum = 1.0
    tail = math.inf
    for n in range(1, cfg.max_terms):
        previous = abs(term)
        try:
            term = term * z / bracket(n)
            total += term
            size = abs(term)
            magnitude = abs(total)
        except (QRangeError, OverflowError):
            magnitude = math.inf
        if not (cmath.isfinite(total) and math.isfinite(magnitude)):
            logger.warning("series overflows at n=%d, z=%s", n, z)
            return _refused(EvalStatus.OutsideDomain, terms_used=n)
        abs_sum += size
        if size == 0.0:
            tail = 0.0
        else:
            ratio = size / previous
            if ratio >= 1.0:
                continue
            tail = size * ratio / (1.0 - ratio)
        if tail <= cfg.rel_tol * magnitude or (tail == 0.0 and magnitude < ABSOLUTE_FLOOR):
            return EvalResult(
                value=total,
                terms_used=n + 1,
                err_estimate=tail,
                status=EvalStatus.Converged,
                condition=abs_sum / magnitude if magnitude else math.inf,
            )

    logger.warning("series hit max_terms=%d at z=%s (tail=%.3g)", cfg.max_terms, z, tail)
    magnitude = abs(total)
    return EvalResult(
        value=total,
        terms_used=cfg.max_terms,
        err_estimate=tail,
        status=EvalStatus.CapReached,
        condition=abs_sum / magnitude if magnitude else math.inf,
    )


def _multiply_factors(
    z: complex,
    p: float,
    cfg: EvalConfig,
    *,
    scale: float,
    numerator: bool,
    denominator: bool,
) -> EvalResult:
    """
    Product over k of (1 + a_k)^[numerator] / (1 - a_k)^[denominator],
    a_k = scale (1 - p) p^k z with 0 < p < 1.
    """
    a = scale * (1.0 - p) * z
    tail_weight = float(numerator) + float(denominator)
    value = 1.0 + 0j
    for k in range(cfg.max_factors):
        tail = tail_weight * abs(a) / (1.0 - p)
        if tail <= cfg.rel_tol:
            return EvalResult(
                value=value,
                terms_used=k,
                err_estimate=tail * abs(value),
                status=EvalStatus.Converged,
            )
        factor = 1.0 + a if numerator else 1.0 + 0j
        if denominator:
            below = 1.0 - a
            if abs(below) < POLE_THRESHOLD * (1.0 + abs(a)):
                logger.debug("pole at z=%s (factor k=%d, q=%s)", z, k, p)
                return _refused(EvalStatus.Pole, terms_used=k)
            factor = factor / below
        value *= factor
        if not cmath.isfinite(value):
            logger.warning("product overflows at z=%s (factor k=%d, q=%s)", z, k, p)
            return _refused(EvalStatus.OutsideDomain, terms_used=k + 1)
        a *= p

    logger.warning("product hit max_factors=%d at z=%s (q=%s)", cfg.max_factors, z, p)
    return EvalResult(
        value=value,
        terms_used=cfg.max_factors,
        err_estimate=tail_weight * abs(a) / (1.0 - p) * abs(value),
        status=EvalStatus.CapReached,
    )


def eq_small_series(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    cfg = cfg or EvalConfig()
    qp = as_qparam(q)
    z = complex(z)
    if abs(z) >= _small_exp_radius(qp):
        return _refused(EvalStatus.OutsideDomain)
    return _sum_series(z, lambda n: q_bracket(n, qp), cfg)


def eq_product(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    cfg = cfg or EvalConfig()
    qp = as_qparam(q)
    z = complex(z)
    if qp.regime is Regime.One:
        return _classical(z)
    if qp.regime is Regime.SuperOne:
        # e_q = E_{1/q}
        return _multiply_factors(
            z, qp.inverse().q, cfg, scale=1.0, numerator=True, denominator=False
        )
    return _multiply_factors(z, qp.q, cfg, scale=1.0, numerator=False, denominator=True)


def Eq_big_series(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    return eq_small_series(z, as_qparam(q).inverse(), cfg)


def Eq_big_product(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    cfg = cfg or EvalConfig()
    qp = as_qparam(q)
    z = complex(z)
    if qp.regime is Regime.One:
        return _classical(z)
    if qp.regime is Regime.SuperOne:
        # E_q = e_{1/q}
        return _multiply_factors(
            z, qp.inverse().q, cfg, scale=1.0, numerator=False, denominator=True
        )
    return _multiply_factors(z, qp.q, cfg, scale=1.0, numerator=True, denominator=False)


def calE_series(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    cfg = cfg or EvalConfig()
    qp = as_qparam(q)
    z = complex(z)
    if abs(z) >= radius_of_convergence(qp).radius:
        return _refused(EvalStatus.OutsideDomain)
    reduced = qp.reduced()
    return _sum_series(z, lambda n: brace_bracket(n, reduced), cfg)


def calE_product(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    cfg = cfg or EvalConfig()
    qp = as_qparam(q)
    z = complex(z)
    if qp.regime is Regime.One:
        return _classical(z)
    return _multiply_factors(
        z, qp.reduced().q, cfg, scale=0.5, numerator=True, denominator=True
    )


def _auto(
    z: complex,
    qp: QParam,
    cfg: EvalConfig,
    *,
    radius: float,
    series: Evaluator,
    product: Evaluator,
) -> EvalResult:
    if abs(z) < AUTO_SERIES_FRACTION * radius:
        result = series(z, qp, cfg)
        if result.converged and result.condition * MACHINE_EPSILON <= cfg.rel_tol:
            return result
        logger.debug(
            "series at z=%s (q=%s) is %s with condition %.3g, switching to product",
            z,
            qp.q,
            result.status.value,
            result.condition,
        )
    return product(z, qp, cfg)


def _dispatch(
    z: complex,
    q: QParam | float,
    cfg: EvalConfig | None,
    *,
    radius: Callable[[QParam], float],
    series: Evaluator,
    product: Evaluator,
) -> EvalResult:
    cfg = cfg or EvalConfig()
    qp = as_qparam(q)
    z = complex(z)
    if cfg.method is EvalMethod.Series:
        return series(z, qp, cfg)
    if cfg.method is EvalMethod.Product:
        return product(z, qp, cfg)
    if qp.regime is Regime.One:
        return _classical(z)
    return _auto(z, qp, cfg, radius=radius(qp), series=series, product=product)


def calE(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    """
    Improved q-exponential, e_q^(z/2) E_q^(z/2).

    Auto picks the {n}!-series inside 0.75 R_q when it is well conditioned
    and the Cayley product otherwise.
    """
    return _dispatch(
        z,
        q,
        cfg,
        radius=lambda qp: radius_of_convergence(qp).radius,
        series=calE_series,
        product=calE_product,
    )


def eq(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    return _dispatch(
        z,
        q,
        cfg,
        radius=_small_exp_radius,
        series=eq_small_series,
        product=eq_product,
    )


def Eq_big(z: complex, q: QParam | float, cfg: EvalConfig | None = None) -> EvalResult:
    return eq(z, as_qparam(q).inverse(), cfg)


def cayley(z: complex, a: float) -> complex:
    below = 1.0 - a * z
    if abs(below) < POLE_THRESHOLD * (1.0 + abs(a) * abs(z)):
        raise QDomainError(f"Cayley transform has a pole at z={z} for a={a}")
    return (1.0 + a * z) / below


def cayley_step(value_at_z: complex, z: complex, q: QParam | float) -> complex:
    """Value of calE at qz from its value at z."""
    qp = as_qparam(q)
    return cayley(-z / 2, 1.0 - qp.q) * value_at_z


def cayley_orbit(seed: complex, z: complex, q: QParam | float, steps: int) -> list[complex]:
    """
    calE on the geometric grid z, qz, ..., q^steps z, starting from its value at z.
    """
    qp = as_qparam(q)
    values = [complex(seed)]
    point = complex(z)
    for _ in range(steps):
        values.append(cayley_step(values[-1], point, qp))
        point *= qp.q
    return values


def calE_coefficient(n: int, q: QParam | float) -> float:
    return 1.0 / q_factorial(n, q, BracketKind.Brace)


def cauchy_coefficient(n: int, q: QParam | float) -> float:
    """
    Coefficient of z^n in the Cauchy product of the e_q(z/2) and E_q(z/2) series.
    """
    qp = as_qparam(q)
    total = math.fsum(
        qp.q ** (j * (j - 1) // 2) / (q_factorial(j, qp) * q_factorial(n - j, qp))
        for j in range(n + 1)
    )
    return total / 2.0**n


def brace_series_ratios(z: complex, q: QParam | float, count: int) -> list[float]:
    """Successive |t_(n+1) / t_n| of the {n}!-series, n = 0 .. count-1."""
    qp = as_qparam(q)
    size = abs(z)
    return [size / brace_bracket(n + 1, qp) for n in range(count)]
