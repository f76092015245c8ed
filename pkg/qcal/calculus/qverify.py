from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy

from qcal.calculus import qexp, qtrig
from qcal.calculus.qcore import (
    BracketKind,
    average_operator,
    gauss_binomial_product,
    gauss_binomial_sum,
    jackson_derivative,
    q_factorial,
)
from qcal.core.config import settings
from qcal.core.errors import EvaluationError, QDomainError, QRangeError, UnknownIdentityError
from qcal.schemas.evaluation import EvalResult, QParam, Regime, TrigValue, as_qparam
from qcal.schemas.verification import GridPoint, IdentityReport, IdentitySpec, WorstPoint

logger = logging.getLogger(__name__)

DEFAULT_Q_VALUES: tuple[float, ...] = (0.3, 0.5, 0.9, 2.0, 5.0)
POLE_EXCLUSION = 1e-6
POLE_REACH = 1e3
MAX_BRACKET_INDEX = 20
MIN_DERIVATIVE_ARG = 0.05
# cap on |z| for series-vs-product sampling; past it the alternating
# {n}!-series loses more than 1e-11 to cancellation in double precision
SERIES_ORACLE_CAP = 6.0


class IdentityId(str, Enum):
    TildeFactorial = "TildeFactorial"
    GaussBinomialSum = "GaussBinomialSum"
    BraceDuality = "BraceDuality"
    CauchyProduct = "CauchyProduct"
    ExpDerivative = "ExpDerivative"
    BigExpDerivative = "BigExpDerivative"
    ClassicalInverse = "ClassicalInverse"
    StandardTrigUnity = "StandardTrigUnity"
    StandardTrigCross = "StandardTrigCross"
    TangentsCoincide = "TangentsCoincide"
    SinDerivative = "SinDerivative"
    CosDerivative = "CosDerivative"
    BigSinDerivative = "BigSinDerivative"
    BigCosDerivative = "BigCosDerivative"
    Inverse = "Inverse"
    UnitModulus = "UnitModulus"
    Duality = "Duality"
    Conjugation = "Conjugation"
    SeriesProduct = "SeriesProduct"
    Factorization = "Factorization"
    CayleyRecurrence = "CayleyRecurrence"
    ImprovedExpDerivative = "ImprovedExpDerivative"
    Pythagorean = "Pythagorean"
    Boundedness = "Boundedness"
    ImprovedSinDerivative = "ImprovedSinDerivative"
    ImprovedCosDerivative = "ImprovedCosDerivative"
    DoubleAngleProduct = "DoubleAngleProduct"
    DoubleAngleTangent = "DoubleAngleTangent"
    Parity = "Parity"
    StandardPythagorean = "StandardPythagorean"
    ClassicalLimit = "ClassicalLimit"


class ResidualKind(str, Enum):
    absolute = "absolute"  # |L - R|
    scaled = "scaled"  # |L - R| / (1 + |R|)
    relative = "relative"  # |L - R| / |R|


Sides = list[tuple[complex, complex]]
Sampler = Callable[[numpy.random.Generator, QParam, int], list[complex]]
Radius = Callable[[QParam], float]


def _no_poles(_q: QParam) -> list[complex]:
    return []


@dataclass(frozen=True)
class IdentityDefinition:
    id: IdentityId
    statement: str
    kind: ResidualKind
    tolerance: float
    sampler: Sampler
    sides: Callable[[complex, QParam], Sides]
    poles: Callable[[QParam], list[complex]] = _no_poles
    q_values: tuple[float, ...] = DEFAULT_Q_VALUES


def _value(result: EvalResult | TrigValue, label: str) -> complex:
    return complex(result.require(label))


def _calE(z: complex, q: QParam) -> complex:
    return _value(qexp.calE(z, q), "calE")


def _eq(z: complex, q: QParam) -> complex:
    return _value(qexp.eq(z, q), "eq")


def _Eq(z: complex, q: QParam) -> complex:
    return _value(qexp.Eq_big(z, q), "Eq_big")


def _trig(function: Callable[..., TrigValue], x: complex, q: QParam) -> complex:
    return _value(function(x, q), function.__name__)


def _curried(function: Callable[..., TrigValue], q: QParam) -> Callable[[complex], complex]:
    return lambda x: _trig(function, x, q)


def _indices(_rng: numpy.random.Generator, _q: QParam, _count: int) -> list[complex]:
    return [complex(n) for n in range(MAX_BRACKET_INDEX + 1)]


def _real_interval(low: float, high: float) -> Sampler:
    def sample(rng: numpy.random.Generator, _q: QParam, count: int) -> list[complex]:
        return [complex(x) for x in rng.uniform(low, high, count)]

    return sample


def _imaginary_interval(low: float, high: float) -> Sampler:
    def sample(rng: numpy.random.Generator, _q: QParam, count: int) -> list[complex]:
        return [complex(0.0, x) for x in rng.uniform(low, high, count)]

    return sample


def _symmetric_real(radius: Radius, *, minimum: float = 0.0) -> Sampler:
    def sample(rng: numpy.random.Generator, q: QParam, count: int) -> list[complex]:
        magnitudes = rng.uniform(minimum, radius(q), count)
        signs = rng.choice((-1.0, 1.0), count)
        return [complex(x) for x in magnitudes * signs]

    return sample


def _disc(radius: Radius, *, minimum: float = 0.0) -> Sampler:
    def sample(rng: numpy.random.Generator, q: QParam, count: int) -> list[complex]:
        outer = radius(q)
        # uniform in area on the annulus minimum <= |z| < outer
        moduli = numpy.sqrt(rng.uniform((minimum / outer) ** 2, 1.0, count)) * outer
        angles = rng.uniform(0.0, 2.0 * math.pi, count)
        return [complex(z) for z in moduli * numpy.exp(1j * angles)]

    return sample


def _scaled_radius(
    base: Radius,
    fraction: float,
    *,
    cap: float = math.inf,
    room_for_qz: bool = False,
) -> Radius:
    def radius(q: QParam) -> float:
        value = fraction * base(q)
        if room_for_qz:
            value /= max(1.0, q.q)
        return min(value, cap)

    return radius


def _improved_radius(q: QParam) -> float:
    return qexp.radius_of_convergence(q).radius


def _standard_radius(q: QParam) -> float:
    return min(qtrig.small_family_radius(q), qtrig.big_family_radius(q))


def _small_exp_radius(q: QParam) -> float:
    return qtrig.small_family_radius(q)


def _big_exp_radius(q: QParam) -> float:
    return qtrig.big_family_radius(q)


def _geometric_poles(base: float, q: QParam) -> list[complex]:
    p = q.reduced().q
    if p == 1.0:
        return []
    poles: list[complex] = []
    k = 0
    while (location := base / ((1.0 - p) * p**k)) <= POLE_REACH:
        poles.extend((complex(location), complex(-location)))
        k += 1
    return poles


def _improved_poles(q: QParam) -> list[complex]:
    return _geometric_poles(2.0, q)


def _classical_poles(q: QParam) -> list[complex]:
    return _geometric_poles(1.0, q)


def _near_pole(arg: complex, q: QParam, poles: Sequence[complex]) -> bool:
    return any(
        abs(point - pole) < POLE_EXCLUSION for point in (arg, q.q * arg) for pole in poles
    )


def _index(arg: complex) -> int:
    return int(round(arg.real))


def _tilde_factorial(arg: complex, q: QParam) -> Sides:
    n = _index(arg)
    return [
        (
            q_factorial(n, q, BracketKind.Tilde),
            q.q ** ((1 - n) * n // 2) * q_factorial(n, q, BracketKind.Plain),
        )
    ]


def _gauss_binomial_sum(arg: complex, q: QParam) -> Sides:
    n = _index(arg)
    return [(gauss_binomial_sum(n, q), gauss_binomial_product(n, q))]


def _brace_duality(arg: complex, q: QParam) -> Sides:
    n = _index(arg)
    return [(q_factorial(n, q, BracketKind.Brace), q_factorial(n, q.inverse(), BracketKind.Brace))]


def _cauchy_product(arg: complex, q: QParam) -> Sides:
    n = _index(arg)
    return [(qexp.calE_coefficient(n, q), qexp.cauchy_coefficient(n, q))]


def _exp_derivative(z: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(lambda w: _eq(w, q), z, q)
    return [(derivative, _eq(z, q))]


def _big_exp_derivative(z: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(lambda w: _Eq(w, q), z, q)
    return [(derivative, _Eq(q.q * z, q))]


def _classical_inverse(z: complex, q: QParam) -> Sides:
    return [(_eq(z, q) * _Eq(-z, q), 1.0)]


def _standard_quartet(x: complex, q: QParam) -> tuple[complex, complex, complex, complex]:
    return (
        _trig(qtrig.sin_q, x, q),
        _trig(qtrig.cos_q, x, q),
        _trig(qtrig.Sin_q, x, q),
        _trig(qtrig.Cos_q, x, q),
    )


def _standard_trig_unity(x: complex, q: QParam) -> Sides:
    s, c, S, C = _standard_quartet(x, q)
    return [(c * C + s * S, 1.0)]


def _standard_trig_cross(x: complex, q: QParam) -> Sides:
    s, c, S, C = _standard_quartet(x, q)
    return [(s * C, c * S)]


def _tangents_coincide(x: complex, q: QParam) -> Sides:
    return [(_trig(qtrig.tan_q, x, q), _trig(qtrig.Tan_q, x, q))]


def _sin_derivative(x: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(_curried(qtrig.sin_q, q), x, q)
    return [(derivative, _trig(qtrig.cos_q, x, q))]


def _cos_derivative(x: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(_curried(qtrig.cos_q, q), x, q)
    return [(derivative, -_trig(qtrig.sin_q, x, q))]


def _big_sin_derivative(x: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(_curried(qtrig.Sin_q, q), x, q)
    return [(derivative, _trig(qtrig.Cos_q, q.q * x, q))]


def _big_cos_derivative(x: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(_curried(qtrig.Cos_q, q), x, q)
    return [(derivative, -_trig(qtrig.Sin_q, q.q * x, q))]


def _inverse(z: complex, q: QParam) -> Sides:
    return [(_calE(-z, q) * _calE(z, q), 1.0)]


def _unit_modulus(z: complex, q: QParam) -> Sides:
    return [(abs(_calE(z, q)), 1.0)]


def _duality(z: complex, q: QParam) -> Sides:
    return [(_calE(z, q), _calE(z, q.inverse()))]


def _conjugation(z: complex, q: QParam) -> Sides:
    return [(_calE(z, q).conjugate(), _calE(z.conjugate(), q))]


def _series_product(z: complex, q: QParam) -> Sides:
    series = _value(qexp.calE_series(z, q), "calE_series")
    product = _value(qexp.calE_product(z, q), "calE_product")
    return [(series, product)]


def _factorization(z: complex, q: QParam) -> Sides:
    return [(_calE(z, q), _eq(z / 2, q) * _Eq(z / 2, q))]


def _cayley_recurrence(z: complex, q: QParam) -> Sides:
    return [(_calE(q.q * z, q), qexp.cayley_step(_calE(z, q), z, q))]


def _improved_exp_derivative(z: complex, q: QParam) -> Sides:
    function = lambda w: _calE(w, q)  # noqa: E731
    return [(jackson_derivative(function, z, q), average_operator(function, z, q))]


def _improved_pair(x: complex, q: QParam) -> tuple[complex, complex]:
    return _trig(qtrig.calSin, x, q), _trig(qtrig.calCos, x, q)


def _pythagorean(x: complex, q: QParam) -> Sides:
    sine, cosine = _improved_pair(x, q)
    return [(cosine * cosine + sine * sine, 1.0)]


def _boundedness(x: complex, q: QParam) -> Sides:
    sine, cosine = _improved_pair(x, q)
    return [(max(0.0, abs(sine) - 1.0, abs(cosine) - 1.0), 0.0)]


def _improved_sin_derivative(x: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(_curried(qtrig.calSin, q), x, q)
    return [(derivative, average_operator(_curried(qtrig.calCos, q), x, q))]


def _improved_cos_derivative(x: complex, q: QParam) -> Sides:
    derivative = jackson_derivative(_curried(qtrig.calCos, q), x, q)
    return [(derivative, -average_operator(_curried(qtrig.calSin, q), x, q))]


def _double_angle_product(x: complex, q: QParam) -> Sides:
    s, c, S, C = _standard_quartet(x, q)
    sine2, cosine2 = _improved_pair(2 * x, q)
    return [(cosine2, c * C - s * S), (sine2, s * C + c * S)]


def _double_angle_tangent(x: complex, q: QParam) -> Sides:
    t = _trig(qtrig.tan_q, x, q)
    sine2, cosine2 = _improved_pair(2 * x, q)
    return [(cosine2, (1 - t * t) / (1 + t * t)), (sine2, 2 * t / (1 + t * t))]


def _parity(x: complex, q: QParam) -> Sides:
    sine, cosine = _improved_pair(x, q)
    sine_neg, cosine_neg = _improved_pair(-x, q)
    return [(sine_neg, -sine), (cosine_neg, cosine)]


def _standard_pythagorean(x: complex, q: QParam) -> Sides:
    s, c, _S, _C = _standard_quartet(x, q)
    return [(c * c + s * s, 1.0)]


_STANDARD_GRID = _symmetric_real(_scaled_radius(_standard_radius, 0.9, cap=10.0))
_STANDARD_DERIVATIVE_GRID = _symmetric_real(
    _scaled_radius(_standard_radius, 0.9, cap=10.0, room_for_qz=True),
    minimum=MIN_DERIVATIVE_ARG,
)
_IMPROVED_DISC = _disc(_scaled_radius(_improved_radius, 0.6))

REGISTRY: tuple[IdentityDefinition, ...] = (
    IdentityDefinition(
        IdentityId.TildeFactorial,
        "[n~]! = q^((1-n)n/2) [n]!",
        ResidualKind.relative,
        1e-12,
        _indices,
        _tilde_factorial,
    ),
    IdentityDefinition(
        IdentityId.GaussBinomialSum,
        "sum_j q^(j(j-1)/2) [n choose j] = (1+1)(1+q)...(1+q^(n-1))",
        ResidualKind.relative,
        1e-12,
        _indices,
        _gauss_binomial_sum,
    ),
    IdentityDefinition(
        IdentityId.BraceDuality,
        "{n}_q! = {n}_(1/q)!",
        ResidualKind.relative,
        1e-12,
        _indices,
        _brace_duality,
    ),
    IdentityDefinition(
        IdentityId.CauchyProduct,
        "1/{n}! = coefficient of z^n in e_q(z/2) E_q(z/2)",
        ResidualKind.relative,
        1e-12,
        _indices,
        _cauchy_product,
    ),
    IdentityDefinition(
        IdentityId.ExpDerivative,
        "D_q e_q(z) = e_q(z)",
        ResidualKind.scaled,
        1e-9,
        _disc(
            _scaled_radius(_small_exp_radius, 0.6, cap=3.0, room_for_qz=True),
            minimum=MIN_DERIVATIVE_ARG,
        ),
        _exp_derivative,
        _classical_poles,
    ),
    IdentityDefinition(
        IdentityId.BigExpDerivative,
        "D_q E_q(z) = E_q(qz)",
        ResidualKind.scaled,
        1e-9,
        _disc(
            _scaled_radius(_big_exp_radius, 0.6, cap=3.0, room_for_qz=True),
            minimum=MIN_DERIVATIVE_ARG,
        ),
        _big_exp_derivative,
        _classical_poles,
    ),
    IdentityDefinition(
        IdentityId.ClassicalInverse,
        "e_q(z) E_q(-z) = 1",
        ResidualKind.absolute,
        1e-11,
        _disc(_scaled_radius(_standard_radius, 0.6, cap=3.0)),
        _classical_inverse,
        _classical_poles,
    ),
    IdentityDefinition(
        IdentityId.StandardTrigUnity,
        "cos_q Cos_q + sin_q Sin_q = 1",
        ResidualKind.absolute,
        1e-10,
        _STANDARD_GRID,
        _standard_trig_unity,
    ),
    IdentityDefinition(
        IdentityId.StandardTrigCross,
        "sin_q Cos_q = cos_q Sin_q",
        ResidualKind.scaled,
        1e-10,
        _STANDARD_GRID,
        _standard_trig_cross,
    ),
    IdentityDefinition(
        IdentityId.TangentsCoincide,
        "tan_q = Tan_q",
        ResidualKind.scaled,
        1e-10,
        _STANDARD_GRID,
        _tangents_coincide,
    ),
    IdentityDefinition(
        IdentityId.SinDerivative,
        "D_q sin_q = cos_q",
        ResidualKind.scaled,
        1e-9,
        _STANDARD_DERIVATIVE_GRID,
        _sin_derivative,
    ),
    IdentityDefinition(
        IdentityId.CosDerivative,
        "D_q cos_q = -sin_q",
        ResidualKind.scaled,
        1e-9,
        _STANDARD_DERIVATIVE_GRID,
        _cos_derivative,
    ),
    IdentityDefinition(
        IdentityId.BigSinDerivative,
        "D_q Sin_q(x) = Cos_q(qx)",
        ResidualKind.scaled,
        1e-9,
        _STANDARD_DERIVATIVE_GRID,
        _big_sin_derivative,
    ),
    IdentityDefinition(
        IdentityId.BigCosDerivative,
        "D_q Cos_q(x) = -Sin_q(qx)",
        ResidualKind.scaled,
        1e-9,
        _STANDARD_DERIVATIVE_GRID,
        _big_cos_derivative,
    ),
    IdentityDefinition(
        IdentityId.Inverse,
        "calE(-z) calE(z) = 1",
        ResidualKind.absolute,
        1e-11,
        _IMPROVED_DISC,
        _inverse,
        _improved_poles,
    ),
    IdentityDefinition(
        IdentityId.UnitModulus,
        "|calE(ix)| = 1",
        ResidualKind.absolute,
        1e-11,
        _imaginary_interval(-100.0, 100.0),
        _unit_modulus,
    ),
    IdentityDefinition(
        IdentityId.Duality,
        "calE_q(z) = calE_(1/q)(z)",
        ResidualKind.scaled,
        1e-11,
        _IMPROVED_DISC,
        _duality,
        _improved_poles,
    ),
    IdentityDefinition(
        IdentityId.Conjugation,
        "conj calE(z) = calE(conj z)",
        ResidualKind.scaled,
        1e-11,
        _IMPROVED_DISC,
        _conjugation,
        _improved_poles,
    ),
    # sampled inside min(0.6 R, SERIES_ORACLE_CAP) rather than the whole 0.6 R disc;
    # the Auto dispatcher covers the rest of the disc through the product
    IdentityDefinition(
        IdentityId.SeriesProduct,
        "{n}!-series = Cayley product",
        ResidualKind.scaled,
        1e-11,
        _disc(_scaled_radius(_improved_radius, 0.6, cap=SERIES_ORACLE_CAP)),
        _series_product,
        _improved_poles,
    ),
    IdentityDefinition(
        IdentityId.Factorization,
        "calE(z) = e_q(z/2) E_q(z/2)",
        ResidualKind.scaled,
        1e-11,
        _IMPROVED_DISC,
        _factorization,
        _improved_poles,
    ),
    IdentityDefinition(
        IdentityId.CayleyRecurrence,
        "calE(qz) = cay(-z/2, 1-q) calE(z)",
        ResidualKind.scaled,
        1e-11,
        _disc(_scaled_radius(_improved_radius, 0.6, room_for_qz=True)),
        _cayley_recurrence,
        _improved_poles,
    ),
    IdentityDefinition(
        IdentityId.ImprovedExpDerivative,
        "D_q calE = <calE>",
        ResidualKind.scaled,
        1e-9,
        _disc(
            _scaled_radius(_improved_radius, 0.6, room_for_qz=True),
            minimum=MIN_DERIVATIVE_ARG,
        ),
        _improved_exp_derivative,
        _improved_poles,
    ),
    IdentityDefinition(
        IdentityId.Pythagorean,
        "calCos^2 + calSin^2 = 1",
        ResidualKind.absolute,
        1e-11,
        _real_interval(-50.0, 50.0),
        _pythagorean,
    ),
    IdentityDefinition(
        IdentityId.Boundedness,
        "|calSin|, |calCos| <= 1",
        ResidualKind.absolute,
        1e-11,
        _real_interval(-50.0, 50.0),
        _boundedness,
    ),
    IdentityDefinition(
        IdentityId.ImprovedSinDerivative,
        "D_q calSin = <calCos>",
        ResidualKind.scaled,
        1e-9,
        _symmetric_real(lambda _q: 20.0, minimum=MIN_DERIVATIVE_ARG),
        _improved_sin_derivative,
    ),
    IdentityDefinition(
        IdentityId.ImprovedCosDerivative,
        "D_q calCos = -<calSin>",
        ResidualKind.scaled,
        1e-9,
        _symmetric_real(lambda _q: 20.0, minimum=MIN_DERIVATIVE_ARG),
        _improved_cos_derivative,
    ),
    IdentityDefinition(
        IdentityId.DoubleAngleProduct,
        "calCos 2x = cos_q Cos_q - sin_q Sin_q, calSin 2x = sin_q Cos_q + cos_q Sin_q",
        ResidualKind.scaled,
        1e-10,
        _STANDARD_GRID,
        _double_angle_product,
    ),
    IdentityDefinition(
        IdentityId.DoubleAngleTangent,
        "calCos 2x = (1 - tan^2)/(1 + tan^2), calSin 2x = 2 tan/(1 + tan^2)",
        ResidualKind.scaled,
        1e-10,
        _STANDARD_GRID,
        _double_angle_tangent,
    ),
    IdentityDefinition(
        IdentityId.Parity,
        "calSin odd, calCos even",
        ResidualKind.absolute,
        1e-12,
        _real_interval(-20.0, 20.0),
        _parity,
    ),
)

CONTROLS: tuple[IdentityDefinition, ...] = (
    IdentityDefinition(
        IdentityId.StandardPythagorean,
        "cos_q^2 + sin_q^2 = 1 (fails: standard family)",
        ResidualKind.absolute,
        1e-11,
        _real_interval(0.0, 1.0),
        _standard_pythagorean,
    ),
)

_DEFINITIONS: dict[IdentityId, IdentityDefinition] = {
    definition.id: definition for definition in (*REGISTRY, *CONTROLS)
}


def registry_ids() -> list[str]:
    return [definition.id.value for definition in REGISTRY]


def _definition(identity_id: str | IdentityId) -> IdentityDefinition:
    try:
        return _DEFINITIONS[IdentityId(identity_id)]
    except (ValueError, KeyError) as exc:
        raise UnknownIdentityError(f"unknown identity '{identity_id}'") from exc


def residual(kind: ResidualKind, lhs: complex, rhs: complex) -> float:
    difference = abs(lhs - rhs)
    if kind is ResidualKind.absolute:
        value = difference
    elif kind is ResidualKind.scaled:
        value = difference / (1.0 + abs(rhs))
    else:
        value = difference / abs(rhs) if rhs != 0 else difference
    if math.isnan(value):
        return math.inf
    return value


def _report(
    identity_id: str,
    residuals: list[float],
    worst: GridPoint | None,
    skipped: int,
    tolerance: float,
) -> IdentityReport:
    max_residual = max(residuals, default=0.0)
    return IdentityReport(
        id=identity_id,
        samples_evaluated=len(residuals),
        skipped=skipped,
        max_residual=max_residual,
        mean_residual=math.fsum(residuals) / len(residuals) if residuals else 0.0,
        worst_point=(
            WorstPoint(arg_re=worst.arg.real, arg_im=worst.arg.imag, q=worst.q)
            if worst is not None
            else None
        ),
        passed=bool(residuals) and max_residual <= tolerance,
    )


def build_spec(
    identity_id: str | IdentityId,
    *,
    seed: int | None = None,
    points: int | None = None,
    tolerance: float | None = None,
    q_values: Sequence[float] | None = None,
) -> IdentitySpec:
    """
    Default grid for an identity: `points` samples spread over the q values,
    drawn from a generator seeded by (seed, identity, q index).
    """
    definition = _definition(identity_id)
    seed = settings.QCAL_SEED if seed is None else seed
    points = settings.QCAL_POINTS_PER_IDENTITY if points is None else points
    q_values = tuple(q_values or definition.q_values)
    per_q = max(1, points // len(q_values))
    position = list(IdentityId).index(definition.id)

    grid: list[GridPoint] = []
    skipped = 0
    for q_index, q in enumerate(q_values):
        qp = as_qparam(q)
        rng = numpy.random.default_rng([seed, position, q_index])
        poles = definition.poles(qp)
        for arg in definition.sampler(rng, qp, per_q):
            if _near_pole(arg, qp, poles):
                skipped += 1
                continue
            grid.append(GridPoint(arg=arg, q=qp.q))

    return IdentitySpec(
        id=definition.id.value,
        grid=grid,
        tolerance=definition.tolerance if tolerance is None else tolerance,
        skipped=skipped,
    )


def run_identity(spec: IdentitySpec) -> IdentityReport:
    definition = _definition(spec.id)
    residuals: list[float] = []
    worst: GridPoint | None = None
    worst_residual = -1.0
    skipped = spec.skipped
    params: dict[float, QParam] = {}

    for point in spec.grid:
        qp = params.setdefault(point.q, QParam(q=point.q))
        try:
            pairs = definition.sides(point.arg, qp)
        except (EvaluationError, QDomainError, QRangeError) as exc:
            logger.debug("%s skipped at arg=%s q=%s: %s", spec.id, point.arg, point.q, exc)
            skipped += 1
            continue
        value = max(residual(definition.kind, lhs, rhs) for lhs, rhs in pairs)
        residuals.append(value)
        if value > worst_residual:
            worst_residual = value
            worst = point

    report = _report(spec.id, residuals, worst, skipped, spec.tolerance)
    if report.passed:
        logger.info(
            "%s passed: max residual %.3g over %d samples",
            spec.id,
            report.max_residual,
            report.samples_evaluated,
        )
    else:
        logger.warning(
            "%s (%s) failed: max residual %.3g > %.3g at %s",
            spec.id,
            definition.statement,
            report.max_residual,
            spec.tolerance,
            report.worst_point,
        )
    return report


def run_all(
    tolerance_overrides: Mapping[str, float] | None = None,
    *,
    seed: int | None = None,
    points: int | None = None,
) -> list[IdentityReport]:
    overrides = dict(tolerance_overrides or {})
    known = set(registry_ids())
    for name in overrides:
        if name not in known:
            raise UnknownIdentityError(f"unknown identity '{name}'")

    return [
        run_identity(
            build_spec(
                definition.id,
                seed=seed,
                points=points,
                tolerance=overrides.get(definition.id.value),
            )
        )
        for definition in REGISTRY
    ]


def classical_limit_tolerance(q_near_one: float, grid: Sequence[complex]) -> float:
    """
    Leading deviation of calE from exp near q = 1 is (h^2/36) z^3 e^z with
    h = ln q; twice its grid maximum, plus rounding headroom.
    """
    h = math.log(q_near_one)
    leading = max((abs(z) ** 3 * math.exp(complex(z).real) for z in grid), default=0.0)
    return 2.0 * h * h / 36.0 * leading + 1e-13


def classical_limit_check(
    q_near_one: float,
    grid: Sequence[complex] | None = None,
    tolerance: float | None = None,
) -> IdentityReport:
    qp = as_qparam(q_near_one)
    if abs(qp.q - 1.0) >= 0.1:
        raise QDomainError(f"classical limit check needs |q - 1| < 0.1, got q={qp.q}")
    points = [complex(z) for z in (grid if grid is not None else numpy.linspace(-1.0, 1.0, 41))]
    if tolerance is None:
        tolerance = classical_limit_tolerance(qp.q, points)

    residuals: list[float] = []
    worst: GridPoint | None = None
    worst_residual = -1.0
    skipped = 0
    for z in points:
        result = qexp.calE(z, qp)
        if not result.converged:
            skipped += 1
            continue
        value = abs(result.value - cmath.exp(z))
        residuals.append(value)
        if value > worst_residual:
            worst_residual = value
            worst = GridPoint(arg=z, q=qp.q)

    if qp.regime is Regime.One:
        logger.debug("classical limit at q=1 uses the exact branch")
    return _report(IdentityId.ClassicalLimit.value, residuals, worst, skipped, tolerance)
