"""The extremal constant theta_n, its alternate forms, and the metallic means.

theta_n is the smaller root of x^2 - (n+1)x + 1 and phi_n the positive root of
x^2 - nx - 1. Both have a continued-fraction tower and a hyperbolic form:

    theta_n = 1/(n+1 - 1/(n+1 - ...)) = exp(-arccosh((n+1)/2))
    phi_n   = n + 1/(n + 1/(n + ...))  = exp(arcsinh(n/2))

Towers are truncated innermost-first. The theta tower starts from 0, the phi
tower from n.
"""
from __future__ import annotations

import math

import pydantic

from cevian.domain.errors import NonPositiveDepth, UnsupportedDimension
import cevian.domain.optimizer.objective as objective

DEFAULT_DEPTH = 40


def _check_theta_dimension(n: int) -> None:
    # theta_1 = 1 is outside (0, 1/n)
    if n < 2:
        raise UnsupportedDimension(f"theta_n is defined for n >= 2, got {n}")


def _check_metallic_dimension(n: int) -> None:
    if n < 1:
        raise UnsupportedDimension(f"phi_n is defined for n >= 1, got {n}")


def _check_depth(depth: int) -> None:
    if depth < 1:
        raise NonPositiveDepth(f"depth must be >= 1, got {depth}")


def theta(n: int) -> float:
    """Return (n+1 - sqrt(n^2+2n-3))/2, in the cancellation-free form 2/(n+1 + sqrt((n+3)(n-1)))."""
    _check_theta_dimension(n)
    return 2.0 / (n + 1 + math.sqrt((n + 3) * (n - 1)))


def theta_cf(n: int, depth: int) -> float:
    """Convergent of 1/(n+1 - 1/(n+1 - ...)) truncated at ``depth`` levels."""
    _check_theta_dimension(n)
    _check_depth(depth)
    x = 0.0
    for _ in range(depth):
        x = 1.0 / ((n + 1) - x)
    return x


def theta_hyperbolic(n: int) -> float:
    _check_theta_dimension(n)
    return math.exp(-math.acosh((n + 1) / 2))


def metallic(n: int) -> float:
    """Return the n-th metallic mean (n + sqrt(n^2+4))/2."""
    _check_metallic_dimension(n)
    return (n + math.sqrt(n * n + 4)) / 2


def metallic_cf(n: int, depth: int) -> float:
    """Convergent of n + 1/(n + 1/(n + ...)) truncated at ``depth`` levels."""
    _check_metallic_dimension(n)
    _check_depth(depth)
    x = float(n)
    for _ in range(depth):
        x = n + 1.0 / x
    return x


def metallic_hyperbolic(n: int) -> float:
    _check_metallic_dimension(n)
    return math.exp(math.asinh(n / 2))


def log_printed_constant(n: int) -> float:
    """Log of (n+1)^2 / (n - theta_n)^(n+3), the constant printed for the extremal bound."""
    return 2 * math.log(n + 1) - (n + 3) * math.log(n - theta(n))


def printed_constant(n: int) -> float:
    """The printed constant (n+1)^2 / (n - theta_n)^(n+3), as is."""
    try:
        return (n + 1) ** 2 / (n - theta(n)) ** (n + 3)
    except OverflowError:
        return math.exp(log_printed_constant(n))


class ConstantsRow(pydantic.BaseModel):
    """Every representation of theta_n and phi_n for one n."""

    model_config = pydantic.ConfigDict(frozen=True)

    n: int
    theta: float
    theta_cf: float
    theta_hyp: float
    f_theta: float
    log_f_theta: float
    paper_eq3_value: float
    metallic: float
    metallic_cf: float
    metallic_hyp: float

    @classmethod
    def build(cls, n: int, depth: int = DEFAULT_DEPTH) -> ConstantsRow:
        theta_n = theta(n)
        return cls(
            n=n,
            theta=theta_n,
            theta_cf=theta_cf(n, depth),
            theta_hyp=theta_hyperbolic(n),
            f_theta=objective.f(theta_n, n),
            log_f_theta=objective.log_f(theta_n, n),
            paper_eq3_value=printed_constant(n),
            metallic=metallic(n),
            metallic_cf=metallic_cf(n, depth),
            metallic_hyp=metallic_hyperbolic(n),
        )


def constants_table(
    n_min: int, n_max: int, depth: int = DEFAULT_DEPTH
) -> list[ConstantsRow]:
    """One row per n in n_min..n_max."""
    return [ConstantsRow.build(n, depth) for n in range(n_min, n_max + 1)]
