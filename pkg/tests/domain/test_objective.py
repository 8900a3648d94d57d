"""Tests of the 1-D objective f."""
import math

import pytest

import cevian.domain.optimizer.objective as objective
import cevian.domain.simplex.constants as constants
from cevian.domain.errors import OutOfDomain, UnsupportedDimension


def test_f_at_theta():
    assert objective.f(constants.theta(2), 2) == pytest.approx(0.0901699437, rel=1e-9)


def test_f_prime_against_finite_differences(stream):
    """Central differences, away from theta_n where f' vanishes."""
    checked = 0
    while checked < 1000:
        n = int(stream.integers(2, 11))
        x = float(stream.uniform(0.02, 0.98)) / n
        if abs(x - constants.theta(n)) < 0.02 / n:
            continue
        h = 1e-6 * x
        difference = (objective.f(x + h, n) - objective.f(x - h, n)) / (2 * h)
        assert objective.f_prime(x, n) == pytest.approx(difference, rel=1e-6)
        checked += 1


def test_f_prime_vanishes_at_theta():
    for n in range(2, 11):
        theta = constants.theta(n)
        assert objective.log_f_prime(theta, n) == pytest.approx(0.0, abs=1e-8)
        assert objective.log_f_prime(theta / 2, n) > 0.0
        assert objective.log_f_prime((theta + 1 / n) / 2, n) < 0.0


def test_log_f_prime_has_the_sign_of_f_prime(stream):
    for _ in range(200):
        n = int(stream.integers(2, 20))
        x = float(stream.uniform(0.01, 0.99)) / n
        assert math.copysign(1, objective.log_f_prime(x, n)) == math.copysign(
            1, objective.f_prime(x, n)
        )


def test_log_f():
    assert objective.log_f(0.1, 3) == pytest.approx(math.log(objective.f(0.1, 3)))


def test_log_f_stays_finite_when_f_underflows():
    theta = constants.theta(500)
    assert objective.f(theta, 500) == 0.0
    assert math.isfinite(objective.log_f(theta, 500))


@pytest.mark.parametrize("x", [0.0, 0.5, -0.1, 0.7])
def test_out_of_domain(x):
    with pytest.raises(OutOfDomain):
        objective.f(x, 2)


def test_unsupported_dimension():
    with pytest.raises(UnsupportedDimension):
        objective.f(0.5, 1)
