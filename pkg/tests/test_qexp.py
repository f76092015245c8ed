import cmath
import math

import pytest

from qcal.calculus.qexp import (
    Eq_big,
    Eq_big_product,
    brace_series_ratios,
    calE,
    calE_coefficient,
    calE_product,
    calE_series,
    cauchy_coefficient,
    cayley,
    cayley_orbit,
    cayley_step,
    eq,
    eq_product,
    eq_small_series,
    radius_of_convergence,
)
from qcal.core.errors import EvaluationError, QDomainError
from qcal.schemas.evaluation import EvalConfig, EvalMethod, EvalStatus


@pytest.mark.parametrize(
    "q, radius",
    [(0.5, 4.0), (0.9, 20.0), (2.0, 4.0), (5.0, 2.5), (1.0, math.inf)],
)
def test_radius_of_convergence(q, radius):
    disc = radius_of_convergence(q)
    assert disc.radius == pytest.approx(radius)
    assert disc.contains(0.5 * radius if math.isfinite(radius) else 1e6)


def test_calE_at_origin_is_one():
    result = calE(0, 0.5)
    assert result.status is EvalStatus.Converged
    assert result.value == 1.0


def test_calE_at_q_one_is_classical_exp():
    z = 1.5 - 0.25j
    assert calE(z, 1.0).value == cmath.exp(z)
    assert eq(z, 1.0).value == cmath.exp(z)
    assert Eq_big(z, 1.0).value == cmath.exp(z)


@pytest.mark.parametrize("z", [0.7, -1.2 + 0.4j, 2.5j])
def test_calE_is_invariant_under_q_inversion(z):
    assert calE(z, 2.0).value == calE(z, 0.5).value


@pytest.mark.parametrize("q", [0.3, 0.5, 2.0])
@pytest.mark.parametrize("z", [1.0, -0.8 + 0.6j, 1.5j])
def test_series_and_product_agree(q, z, cfg):
    series = calE_series(z, q, cfg)
    product = calE_product(z, q, cfg)
    assert series.converged and product.converged
    assert abs(series.value - product.value) <= 1e-12 * (1 + abs(product.value))


def test_calE_product_pole():
    # first denominator factor vanishes at z = 2/(1-q)
    result = calE_product(4.0, 0.5)
    assert result.status is EvalStatus.Pole
    with pytest.raises(EvaluationError):
        result.require("calE")


def test_calE_series_refuses_outside_disc():
    assert calE_series(4.0, 0.5).status is EvalStatus.OutsideDomain
    assert calE_series(3.0, 0.5).status is EvalStatus.Converged


def test_auto_continues_past_the_series_disc():
    result = calE(10.0 + 1.0j, 0.5)
    assert result.converged
    assert result.value * calE(-10.0 - 1.0j, 0.5).value == pytest.approx(1.0, rel=1e-12)


def test_forced_methods():
    series = calE(1.0, 0.5, EvalConfig(method=EvalMethod.Series))
    product = calE(1.0, 0.5, EvalConfig(method=EvalMethod.Product))
    assert series.terms_used > 0 and product.terms_used > 0
    assert series.value == pytest.approx(product.value, rel=1e-12)


def test_term_cap_is_reported():
    result = calE_series(3.0, 0.5, EvalConfig(max_terms=5))
    assert result.status is EvalStatus.CapReached
    assert result.terms_used == 5


def test_big_exponential_product_has_a_zero():
    result = Eq_big_product(-2.0, 0.5)
    assert result.converged
    assert result.value == 0.0


def test_small_series_stops_at_its_disc():
    assert eq_small_series(2.0, 0.5).status is EvalStatus.OutsideDomain
    assert eq_product(2.0, 0.5).status is EvalStatus.Pole
    assert eq(1.0, 0.5).value == pytest.approx(eq_product(1.0, 0.5).value, rel=1e-12)


@pytest.mark.parametrize("q", [0.5, 2.0])
def test_classical_exponentials_are_inverse(q):
    z = 0.9 - 0.3j
    assert eq(z, q).value * Eq_big(-z, q).value == pytest.approx(1.0, rel=1e-12)


def test_factorization(cfg):
    z = 1.3 + 0.2j
    expected = eq(z / 2, 0.5, cfg).value * Eq_big(z / 2, 0.5, cfg).value
    assert calE(z, 0.5, cfg).value == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("x", [0.5, 5.0, 42.0])
def test_unit_modulus_on_imaginary_axis(x):
    assert abs(calE(1j * x, 0.9).value) == pytest.approx(1.0, abs=1e-12)


def test_cayley():
    assert cayley(0.0, 0.5) == 1.0
    assert cayley(1.0, 0.5) == 3.0
    with pytest.raises(QDomainError):
        cayley(2.0, 0.5)


def test_cayley_step_matches_direct_evaluation():
    z, q = 1.2 - 0.4j, 0.5
    step = cayley_step(calE(z, q).value, z, q)
    assert step == pytest.approx(calE(q * z, q).value, rel=1e-12)


def test_cayley_orbit():
    z, q = 2.0, 0.5
    orbit = cayley_orbit(calE(z, q).value, z, q, steps=4)
    assert len(orbit) == 5
    for k, value in enumerate(orbit):
        assert value == pytest.approx(calE(z * q**k, q).value, rel=1e-12)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9, 2.0])
def test_series_coefficients_match_cauchy_product(q):
    for n in range(12):
        assert calE_coefficient(n, q) == pytest.approx(cauchy_coefficient(n, q), rel=1e-12)


def test_brace_series_ratios_tend_to_inverse_radius():
    ratios = brace_series_ratios(1.0, 0.5, 60)
    assert len(ratios) == 60
    assert ratios[-1] == pytest.approx(1.0 / radius_of_convergence(0.5).radius, rel=1e-9)


@pytest.mark.parametrize("q", [0.5, 2.0])
def test_brace_series_ratios_at_large_index(q):
    ratios = brace_series_ratios(1.0, q, 200)
    assert ratios[-1] == pytest.approx(1.0 / radius_of_convergence(q).radius, rel=1e-12)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9, 2.0, 5.0])
@pytest.mark.parametrize("angle", [0.0, 1.0, math.pi / 2, math.pi, 4.0])
def test_series_refuses_beyond_radius(q, angle):
    radius = radius_of_convergence(q).radius
    z = 1.05 * radius * cmath.exp(1j * angle)
    result = calE_series(z, q)
    assert result.status is EvalStatus.OutsideDomain
    assert result.err_estimate == math.inf


@pytest.mark.parametrize("z, q", [(3.0 + 1.0j, 0.9), (2.0, 0.5), (-1.5 + 2.0j, 0.3)])
def test_cayley_orbit_over_forty_steps(z, q):
    orbit = cayley_orbit(calE(z, q).value, z, q, steps=40)
    assert len(orbit) == 41
    for k, value in enumerate(orbit):
        assert value == pytest.approx(calE(z * q**k, q).value, rel=1e-12)


def test_series_overflow_is_reported():
    assert eq_small_series(1e14, 2.0).status is EvalStatus.OutsideDomain

    result = eq(1e14, 2.0)
    assert not result.converged
    assert result.err_estimate == math.inf


@pytest.mark.parametrize("evaluate, q", [(eq_product, 2.0), (Eq_big_product, 0.5)])
def test_product_overflow_is_reported(evaluate, q):
    result = evaluate(1e200, q)
    assert result.status is EvalStatus.OutsideDomain
    with pytest.raises(EvaluationError):
        result.require()


@pytest.mark.parametrize(
    "evaluate, z, q",
    [
        (Eq_big_product, -1.5, 0.5),
        (eq_product, -3.0, 0.5),
        (calE_product, -2.5 + 0.5j, 0.3),
        (calE_product, 3.0, 2.0),
    ],
)
def test_product_error_estimate_is_absolute(evaluate, z, q, cfg):
    result = evaluate(z, q, cfg)
    assert result.converged
    assert result.err_estimate <= cfg.rel_tol * abs(result.value)


def test_imaginary_axis_has_no_product_poles():
    result = calE_product(1e300j, 0.5)
    assert result.status is EvalStatus.Converged
    assert abs(result.value) == pytest.approx(1.0, abs=1e-10)
