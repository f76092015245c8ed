import math

import numpy
import pytest

from qcal.calculus.qverify import (
    REGISTRY,
    SERIES_ORACLE_CAP,
    IdentityId,
    ResidualKind,
    build_spec,
    classical_limit_check,
    classical_limit_tolerance,
    registry_ids,
    residual,
    run_all,
    run_identity,
)
from qcal.calculus.qexp import radius_of_convergence
from qcal.core.config import Settings, settings
from qcal.core.errors import QDomainError, UnknownIdentityError


def test_registry_ids_are_unique():
    ids = registry_ids()
    assert len(ids) == len(REGISTRY) == 29
    assert len(set(ids)) == len(ids)
    assert IdentityId.StandardPythagorean.value not in ids


def test_every_identity_passes(registry_reports):
    assert [report.id for report in registry_reports] == registry_ids()
    failed = [report for report in registry_reports if not report.passed]
    assert failed == []
    for report in registry_reports:
        assert report.samples_evaluated > 0
        assert report.worst_point is not None
        assert report.mean_residual <= report.max_residual


def test_grids_are_deterministic():
    first = build_spec(IdentityId.Pythagorean, seed=7, points=20)
    second = build_spec(IdentityId.Pythagorean, seed=7, points=20)
    other = build_spec(IdentityId.Pythagorean, seed=8, points=20)
    assert first == second
    assert first.grid != other.grid
    assert len(first.grid) == 20


def test_grid_size_follows_points_setting():
    spec = build_spec(IdentityId.UnitModulus, points=50)
    assert len(spec.grid) + spec.skipped == 50


def test_index_identities_cover_indices_up_to_twenty():
    spec = build_spec(IdentityId.TildeFactorial, q_values=[0.5])
    assert [point.arg.real for point in spec.grid] == [float(n) for n in range(21)]


def test_unknown_identity():
    with pytest.raises(UnknownIdentityError):
        build_spec("NoSuchIdentity")
    with pytest.raises(UnknownIdentityError):
        run_all({"NoSuchIdentity": 1e-3}, points=5)


def test_unattainable_tolerance_fails():
    spec = build_spec(IdentityId.Pythagorean, points=50, tolerance=1e-300)
    report = run_identity(spec)
    assert not report.passed
    assert report.max_residual > 1e-300


def test_standard_pythagorean_control_fails():
    report = run_identity(build_spec(IdentityId.StandardPythagorean, points=50))
    assert report.samples_evaluated > 0
    assert not report.passed
    assert report.max_residual > 1e-6


def test_empty_grid_does_not_pass():
    spec = build_spec(IdentityId.Inverse, points=5).model_copy(update={"grid": []})
    report = run_identity(spec)
    assert report.samples_evaluated == 0
    assert not report.passed


@pytest.mark.parametrize(
    "kind, lhs, rhs, expected",
    [
        (ResidualKind.absolute, 1.001, 1.0, 1e-3),
        (ResidualKind.scaled, 3.0, 1.0, 1.0),
        (ResidualKind.relative, 3.0, 1.0, 2.0),
        (ResidualKind.relative, 0.5, 0.0, 0.5),
    ],
)
def test_residual(kind, lhs, rhs, expected):
    assert residual(kind, lhs, rhs) == pytest.approx(expected)


def test_nan_residual_counts_as_failure():
    assert residual(ResidualKind.absolute, complex(math.nan, 0.0), 1.0) == math.inf


def test_classical_limit_near_one():
    report = classical_limit_check(0.999)
    assert report.id == IdentityId.ClassicalLimit.value
    assert report.samples_evaluated == 41
    assert report.max_residual < 1e-6
    assert report.passed


def test_classical_limit_at_one_is_exact():
    report = classical_limit_check(1.0, grid=[0.0, 0.5, -1.0])
    assert report.max_residual == 0.0
    assert report.passed


def test_classical_limit_tolerance_shrinks_with_q():
    grid = [-1.0, 0.0, 1.0]
    assert classical_limit_tolerance(0.99, grid) > classical_limit_tolerance(0.999, grid)


def test_classical_limit_requires_q_near_one():
    with pytest.raises(QDomainError):
        classical_limit_check(0.5)


def test_pythagorean_on_a_dense_grid():
    # 500 points per q on [-50, 50]
    report = run_identity(build_spec(IdentityId.Pythagorean, points=2500))
    assert report.samples_evaluated == 2500
    assert report.max_residual <= 1e-11
    assert report.passed


def test_unit_modulus_on_a_dense_grid():
    # 1000 points per q on the imaginary axis up to |x| = 100
    report = run_identity(build_spec(IdentityId.UnitModulus, points=5000))
    assert report.samples_evaluated == 5000
    assert report.max_residual <= 1e-11
    assert report.passed


def test_series_product_grid_stays_inside_cap():
    """
    Series and product are compared only where the alternating {n}!-series
    keeps its digits in double precision, |z| < min(0.6 R, SERIES_ORACLE_CAP).
    """
    spec = build_spec(IdentityId.SeriesProduct)
    assert spec.grid
    for point in spec.grid:
        cap = min(0.6 * radius_of_convergence(point.q).radius, SERIES_ORACLE_CAP)
        assert abs(point.arg) < cap


def test_classical_limit_at_one_on_a_disc():
    rng = numpy.random.default_rng(5)
    grid = [complex(z) for z in rng.uniform(0, 5, 50) * numpy.exp(1j * rng.uniform(0, 6.3, 50))]
    report = classical_limit_check(1.0, grid=grid)
    assert report.samples_evaluated == 50
    assert report.max_residual <= 1e-14


def test_classical_limit_residual_shrinks_toward_one():
    far = classical_limit_check(0.9)
    near = classical_limit_check(0.999)
    assert far.max_residual > near.max_residual
    assert near.max_residual < 1e-6


def test_seed_comes_from_environment(monkeypatch):
    monkeypatch.setenv("QCAL_SEED", "7")
    assert Settings().QCAL_SEED == 7


def test_default_grid_uses_configured_seed(monkeypatch):
    monkeypatch.setattr(settings, "QCAL_SEED", 7)
    assert build_spec(IdentityId.Pythagorean, points=20) == build_spec(
        IdentityId.Pythagorean, seed=7, points=20
    )
