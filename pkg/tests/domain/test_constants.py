"""Tests of theta_n, the metallic means and their alternate forms."""
import math

import pytest

import cevian.domain.simplex.constants as constants
from cevian.domain.errors import NonPositiveDepth, UnsupportedDimension


def test_theta_special_cases():
    assert constants.theta(2) == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-12)
    assert constants.theta(2) == pytest.approx(1 / ((1 + math.sqrt(5)) / 2) ** 2)
    assert constants.theta(3) == pytest.approx(2 - math.sqrt(3), abs=1e-12)
    assert constants.theta(3) == pytest.approx(math.tan(math.radians(15)), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 10, 1000, 10**6])
def test_theta_is_the_small_root(n):
    theta = constants.theta(n)
    assert 0.0 < theta < 1.0 / n
    assert theta * theta - (n + 1) * theta + 1 == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 11))
def test_theta_three_ways(n):
    theta = constants.theta(n)
    assert constants.theta_cf(n, 40) == pytest.approx(theta, abs=1e-10)
    assert constants.theta_hyperbolic(n) == pytest.approx(theta, abs=1e-10)


def test_theta_cf_first_convergent():
    assert constants.theta_cf(4, 1) == pytest.approx(1 / 5)
    assert constants.theta_cf(4, 2) == pytest.approx(1 / (5 - 1 / 5))


def test_metallic_means():
    assert constants.metallic(1) == pytest.approx((1 + math.sqrt(5)) / 2)
    assert constants.metallic(2) == pytest.approx(1 + math.sqrt(2))
    for n in range(1, 11):
        assert constants.metallic_cf(n, 40) == pytest.approx(
            constants.metallic(n), abs=1e-10
        )
        assert constants.metallic_hyperbolic(n) == pytest.approx(
            constants.metallic(n), rel=1e-13
        )


@pytest.mark.parametrize("n", [1, 2, 10, 1000, 10**6])
def test_metallic_is_a_root(n):
    """phi^2 - n phi - 1 = 0, relative to phi^2 since the terms cancel."""
    phi = constants.metallic(n)
    assert abs(phi * phi - n * phi - 1) / (phi * phi) < 1e-12


def test_dimension_and_depth_errors():
    with pytest.raises(UnsupportedDimension):
        constants.theta(1)
    with pytest.raises(UnsupportedDimension):
        constants.theta_cf(1, 10)
    with pytest.raises(UnsupportedDimension):
        constants.metallic(0)
    with pytest.raises(NonPositiveDepth):
        constants.theta_cf(2, 0)
    with pytest.raises(NonPositiveDepth):
        constants.metallic_cf(2, 0)


def test_printed_constant_for_large_n():
    """Falls back to the log form instead of overflowing."""
    assert math.isfinite(constants.log_printed_constant(400))
    assert constants.printed_constant(400) == pytest.approx(
        math.exp(constants.log_printed_constant(400))
    )


def test_constants_table():
    rows = constants.constants_table(2, 10)
    assert [row.n for row in rows] == list(range(2, 11))
    assert rows[0].theta == pytest.approx(0.38196601, abs=1e-8)
    assert rows[0].f_theta == pytest.approx(0.09016994, abs=1e-8)
    assert rows[1].theta == pytest.approx(0.26794919, abs=1e-8)
    assert rows[1].f_theta == pytest.approx(0.00961894, abs=1e-8)
    for row in rows:
        assert abs(row.theta_cf - row.theta) <= 1e-10
        assert row.log_f_theta == pytest.approx(math.log(row.f_theta))


def test_constants_row_field_order():
    assert list(constants.ConstantsRow.model_fields) == [
        "n",
        "theta",
        "theta_cf",
        "theta_hyp",
        "f_theta",
        "log_f_theta",
        "paper_eq3_value",
        "metallic",
        "metallic_cf",
        "metallic_hyp",
    ]


@pytest.mark.parametrize("n", [2, 3, 7, 10, 1000, 10**6])
def test_theta_reciprocal_relation(n):
    theta = constants.theta(n)
    assert theta * (n + 1 - theta) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 11))
def test_theta_cf_error_does_not_grow(n):
    theta = constants.theta(n)
    errors = [abs(constants.theta_cf(n, depth) - theta) for depth in range(2, 41)]
    for shallow, deep in zip(errors, errors[1:]):
        assert deep <= shallow + math.ulp(theta)
    assert errors[-1] <= 1e-12
