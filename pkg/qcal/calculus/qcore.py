from __future__ import annotations

import functools
import math
from collections.abc import Callable
from enum import Enum

from qcal.core.errors import QDomainError, QRangeError
from qcal.schemas.evaluation import QParam, Regime, as_qparam

GridFunction = Callable[[complex], complex]

# brackets up to this index are summed term by term
EXPLICIT_SUM_LIMIT = 64


class BracketKind(str, Enum):
    Plain = "plain"
    Tilde = "tilde"
    Brace = "brace"


def _require_index(n: int, *, minimum: int = 0) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < minimum:
        raise QDomainError(f"bracket index must be an integer >= {minimum}, got {n!r}")
    return n


def _power(q: float, k: int) -> float:
    try:
        return q**k
    except OverflowError as exc:
        raise QRangeError(f"q^k overflows (q={q}, k={k})") from exc


@functools.lru_cache(maxsize=8192)
def _bracket_value(n: int, q: float) -> float:
    if q == 1.0:
        return float(n)
    if n <= EXPLICIT_SUM_LIMIT:
        total = 0.0
        for _ in range(n):
            total = total * q + 1.0
    else:
        total = (1.0 - _power(q, n)) / (1.0 - q)
    if math.isinf(total):
        raise QRangeError(f"q-bracket overflows (n={n}, q={q})")
    return total


def q_bracket(n: int, q: QParam | float) -> float:
    """
    [n] = 1 + q + ... + q^(n-1); [0] = 0 and [n] = n at q = 1.
    """
    _require_index(n)
    return _bracket_value(n, as_qparam(q).q)


def q_bracket_tilde(n: int, q: QParam | float) -> float:
    _require_index(n)
    return _bracket_value(n, as_qparam(q).inverse().q)


def brace_bracket(n: int, q: QParam | float) -> float:
    """
    {n} = [n] / (1/2 (1 + q^(n-1))).

    Invariant under q -> 1/q. For q > 1 and large n the reduced parameter
    is used so that q^(n-1) stays finite.
    """
    _require_index(n, minimum=1)
    qp = as_qparam(q)
    if qp.regime is Regime.One:
        return float(n)
    if qp.regime is Regime.SuperOne and n > EXPLICIT_SUM_LIMIT:
        qp = qp.inverse()
    return _bracket_value(n, qp.q) / (0.5 * (1.0 + _power(qp.q, n - 1)))


_BRACKETS: dict[BracketKind, Callable[[int, QParam], float]] = {
    BracketKind.Plain: q_bracket,
    BracketKind.Tilde: q_bracket_tilde,
    BracketKind.Brace: brace_bracket,
}


def q_factorial(
    n: int,
    q: QParam | float,
    kind: BracketKind = BracketKind.Plain,
) -> float:
    _require_index(n)
    qp = as_qparam(q)
    bracket = _BRACKETS[BracketKind(kind)]
    product = 1.0
    for k in range(1, n + 1):
        product *= bracket(k, qp)
        if math.isinf(product):
            raise QRangeError(
                f"{BracketKind(kind).value} q-factorial overflows at k={k} (n={n}, q={qp.q})"
            )
    return product


def gauss_binomial(n: int, j: int, q: QParam | float) -> float:
    """
    [n]! / ([j]! [n-j]!) as a running product of bracket ratios.
    """
    _require_index(n)
    if isinstance(j, bool) or not isinstance(j, int) or not 0 <= j <= n:
        raise QDomainError(f"gauss_binomial needs 0 <= j <= n, got n={n}, j={j!r}")
    qp = as_qparam(q)
    k = min(j, n - j)
    value = 1.0
    for i in range(1, k + 1):
        value *= q_bracket(n - k + i, qp) / q_bracket(i, qp)
    if math.isinf(value):
        raise QRangeError(f"Gauss binomial overflows (n={n}, j={j}, q={qp.q})")
    return value


def gauss_binomial_sum(n: int, q: QParam | float) -> float:
    _require_index(n)
    qp = as_qparam(q)
    try:
        total = math.fsum(
            _power(qp.q, j * (j - 1) // 2) * gauss_binomial(n, j, qp) for j in range(n + 1)
        )
    except OverflowError as exc:
        raise QRangeError(f"Gauss binomial sum overflows (n={n}, q={qp.q})") from exc
    if math.isinf(total):
        raise QRangeError(f"Gauss binomial sum overflows (n={n}, q={qp.q})")
    return total


def gauss_binomial_product(n: int, q: QParam | float) -> float:
    """(1 + 1)(1 + q)...(1 + q^(n-1))."""
    _require_index(n)
    qp = as_qparam(q)
    product = math.prod(1.0 + _power(qp.q, k) for k in range(n))
    if math.isinf(product):
        raise QRangeError(f"Gauss binomial product overflows (n={n}, q={qp.q})")
    return product


def jackson_derivative(f: GridFunction, z: complex, q: QParam | float) -> complex:
    qp = as_qparam(q)
    if qp.regime is Regime.One:
        raise QDomainError("Jackson derivative is undefined at q = 1")
    if z == 0:
        raise QDomainError("Jackson derivative is undefined at z = 0")
    qz = qp.q * z
    return (f(qz) - f(z)) / (qz - z)


def average_operator(f: GridFunction, z: complex, q: QParam | float) -> complex:
    qp = as_qparam(q)
    return (f(z) + f(qp.q * z)) / 2
