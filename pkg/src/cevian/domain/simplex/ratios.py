"""Closed-form volume ratios of cevian simplices, written in barycentric weights.

For an interior point M with weights lambda of the simplex A_0 ... A_n:

  * corner k: Volume(M, all feet but N_k) / Volume(base) = lambda_k prod_{i != k} lambda_i/(1-lambda_i)
  * cevian simplex: Volume(N_0 ... N_n) / Volume(base) = n prod lambda_i / prod (1-lambda_i)

The cevian ratio is the sum of the n+1 corner ratios. Both are cross-checked
against determinant volumes by the verification suites.
"""
from __future__ import annotations

import math
from typing import Any

import numpy as np
import pydantic
import scipy.special

import cevian.domain.optimizer.objective as objective
import cevian.domain.simplex.constants as constants
from cevian.domain.errors import IndexOutOfRange, NotInterior, UnsupportedDimension
from cevian.domain.simplex.core import BarycentricPoint

DECOMPOSITION_RTOL = 1e-12
MOEBIUS_RTOL = 1e-9


def _weights(point: BarycentricPoint) -> np.ndarray:
    if point.facet is not None:
        raise NotInterior("Volume ratios are defined for interior points only")
    return point.array


def _other_weights(point: BarycentricPoint, k: int) -> tuple[float, np.ndarray]:
    weights = _weights(point)
    if not 0 <= k <= point.n:
        raise IndexOutOfRange(f"Corner {k} out of 0..{point.n}")
    return float(weights[k]), np.delete(weights, k)


def _check_dimension(n: int) -> None:
    if n < 2:
        raise UnsupportedDimension(f"n must be >= 2, got {n}")


def corner_ratios_of(weights: np.ndarray) -> np.ndarray:
    """Every corner ratio of a (..., n+1) stack of interior weights.

    Corner k is (1 - lambda_k) prod_i lambda_i/(1-lambda_i), the same product as
    lambda_k prod_{i != k} lambda_i/(1-lambda_i).
    """
    odds = weights / (1.0 - weights)
    return (1.0 - weights) * np.prod(odds, axis=-1, keepdims=True)


def cevian_ratios_of(weights: np.ndarray) -> np.ndarray:
    """n prod lambda_i / prod (1-lambda_i) of a (..., n+1) stack of interior weights."""
    n = weights.shape[-1] - 1
    return n * np.prod(weights / (1.0 - weights), axis=-1)


def corner_ratio(point: BarycentricPoint, k: int) -> float:
    """Volume(M, {N_i}_{i != k}) / Volume(base) = lambda_k prod_{i != k} lambda_i/(1-lambda_i)."""
    _other_weights(point, k)
    return float(corner_ratios_of(point.array)[k])


def log_corner_ratio(point: BarycentricPoint, k: int) -> float:
    weight, others = _other_weights(point, k)
    return math.log(weight) + float(np.sum(np.log(others) - np.log1p(-others)))


def cevian_ratio(point: BarycentricPoint) -> float:
    """Volume(N_0 ... N_n) / Volume(base) = n prod lambda_i / prod (1-lambda_i)."""
    return float(cevian_ratios_of(_weights(point)))


def log_cevian_ratio(point: BarycentricPoint) -> float:
    weights = _weights(point)
    return math.log(point.n) + float(np.sum(np.log(weights) - np.log1p(-weights)))


def per_corner_bound(point: BarycentricPoint, k: int) -> float:
    """(1 - lambda_k) / n^(n+1), the bound on corner k from the proof of the n^-n bound."""
    weight, _ = _other_weights(point, k)
    return (1.0 - weight) / float(point.n) ** (point.n + 1)


def theorem1_bound(n: int) -> float:
    """n^-n, the largest cevian-simplex ratio (reached at the centroid only)."""
    _check_dimension(n)
    return float(n) ** -n


def log_theorem1_bound(n: int) -> float:
    _check_dimension(n)
    return -n * math.log(n)


def theorem2_value(n: int) -> float:
    """f(theta_n), the largest value of corner ratio n, evaluated directly."""
    _check_dimension(n)
    return objective.f(constants.theta(n), n)


def log_theorem2_value(n: int) -> float:
    _check_dimension(n)
    return objective.log_f(constants.theta(n), n)


class RatioBreakdown(pydantic.BaseModel):
    """All the ratios of one interior point, with the two bounds.

    The ratios underflow for large n or tiny weights, so the checks run on the
    logs; a ratio may be 0 when its log is finite.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    n: int
    corner_ratios: tuple[float, ...]
    cevian_ratio: float
    theorem1_bound: float
    theorem2_value: float
    log_corner_ratios: tuple[float, ...]
    log_cevian_ratio: float
    log_theorem1_bound: float
    log_theorem2_value: float

    @pydantic.model_validator(mode="after")
    def _check_ratios(self) -> RatioBreakdown:
        values = (
            *self.corner_ratios,
            self.cevian_ratio,
            self.theorem1_bound,
            self.theorem2_value,
        )
        logs = (
            *self.log_corner_ratios,
            self.log_cevian_ratio,
            self.log_theorem1_bound,
            self.log_theorem2_value,
        )
        if not all(math.isfinite(log) and log < 0.0 for log in logs):
            raise ValueError("Every ratio must be in (0, 1)")
        if not all(0.0 <= value < 1.0 for value in values):
            raise ValueError("Every ratio must be in [0, 1), 0 from underflow only")
        if not math.isclose(
            float(scipy.special.logsumexp(self.log_corner_ratios)),
            self.log_cevian_ratio,
            rel_tol=DECOMPOSITION_RTOL,
            abs_tol=DECOMPOSITION_RTOL,
        ):
            raise ValueError("Corner ratios don't add up to the cevian ratio")
        return self

    @property
    def theorem1_slack(self) -> float:
        return self.theorem1_bound - self.cevian_ratio

    @property
    def theorem2_slack(self) -> float:
        return self.theorem2_value - self.corner_ratios[self.n]

    @property
    def log_theorem1_slack(self) -> float:
        """log(n^-n) - log(cevian ratio), >= 0 and free of underflow."""
        return self.log_theorem1_bound - self.log_cevian_ratio

    @property
    def log_theorem2_slack(self) -> float:
        return self.log_theorem2_value - self.log_corner_ratios[self.n]


def breakdown(point: BarycentricPoint) -> RatioBreakdown:
    corners = range(point.n + 1)
    return RatioBreakdown(
        n=point.n,
        corner_ratios=tuple(corner_ratio(point, k) for k in corners),
        cevian_ratio=cevian_ratio(point),
        theorem1_bound=theorem1_bound(point.n),
        theorem2_value=theorem2_value(point.n),
        log_corner_ratios=tuple(log_corner_ratio(point, k) for k in corners),
        log_cevian_ratio=log_cevian_ratio(point),
        log_theorem1_bound=log_theorem1_bound(point.n),
        log_theorem2_value=log_theorem2_value(point.n),
    )


class AuditRecord(pydantic.BaseModel):
    """The printed extremal constant next to f(theta_n), without judgment."""

    model_config = pydantic.ConfigDict(frozen=True)

    n: int
    paper_value: float
    direct_value: float
    ratio: float
    direct_times_power: float
    """f(theta_n) (n - theta_n)^(n+3); (n-1)^2 up to rounding."""


def audit_bound(n: int) -> AuditRecord:
    """Compare (n+1)^2/(n-theta_n)^(n+3) with f(theta_n)."""
    _check_dimension(n)
    theta_n = constants.theta(n)
    log_direct = objective.log_f(theta_n, n)
    log_printed = constants.log_printed_constant(n)
    return AuditRecord(
        n=n,
        paper_value=constants.printed_constant(n),
        direct_value=objective.f(theta_n, n),
        ratio=math.exp(log_printed - log_direct),
        direct_times_power=math.exp(log_direct + (n + 3) * math.log(n - theta_n)),
    )


class MoebiusAreas(pydantic.BaseModel):
    """Areas cut in a triangle of area S by three concurrent cevians.

    p, q, r are the corner triangles A_0N_1N_2, A_1N_2N_0, A_2N_0N_1 and x the
    cevian triangle N_0N_1N_2.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    p: float
    q: float
    r: float
    x: float
    S: float

    @pydantic.model_validator(mode="after")
    def _check_partition(self) -> MoebiusAreas:
        if min(self.p, self.q, self.r, self.x) <= 0.0:
            raise ValueError("Areas must be positive")
        if not math.isclose(
            self.p + self.q + self.r + self.x, self.S, rel_tol=MOEBIUS_RTOL
        ):
            raise ValueError("p + q + r + x must equal S")
        return self


def moebius_parts(weights: np.ndarray, area: np.ndarray | float = 1.0) -> np.ndarray:
    """Closed-form (p, q, r, x) of a (..., 3) stack of triangle weights, as (..., 4)."""
    odds = weights / (1.0 - weights)
    area = np.asarray(area, dtype=float)[..., np.newaxis]
    corners = area * np.roll(odds, -1, axis=-1) * np.roll(odds, -2, axis=-1)
    cevian = area * cevian_ratios_of(weights)[..., np.newaxis]
    return np.concatenate([corners, cevian], axis=-1)


def moebius_areas(point: BarycentricPoint, area: float = 1.0) -> MoebiusAreas:
    """Closed-form p, q, r, x of a triangle of the given area."""
    if point.n != 2:
        raise UnsupportedDimension("The Moebius relation is about triangles (n = 2)")
    p, q, r, x = moebius_parts(_weights(point), area).tolist()
    return MoebiusAreas(p=p, q=q, r=r, x=x, S=area)


def moebius_residual_of(p: Any, q: Any, r: Any, x: Any) -> Any:
    """4pqr - x^2(p+q+r+x), for floats or arrays."""
    return 4 * p * q * r - x**2 * (p + q + r + x)


def amgm_slack_of(p: Any, q: Any, r: Any, x: Any) -> Any:
    return ((p + q + r + x) / 4) ** 4 - p * q * r * x


def moebius_residual(areas: MoebiusAreas) -> float:
    """Return 4pqr - x^2(p+q+r+x); zero for any cevian configuration."""
    return moebius_residual_of(areas.p, areas.q, areas.r, areas.x)


def amgm_slack(areas: MoebiusAreas) -> float:
    """((p+q+r+x)/4)^4 - pqrx >= 0, the AM-GM step behind x <= S/4."""
    return amgm_slack_of(areas.p, areas.q, areas.r, areas.x)
