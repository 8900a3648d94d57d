"""Things related to the extremal problem: the objective F and optimizer results."""
from __future__ import annotations

import abc

import numpy as np
import pydantic

import cevian.domain.simplex.ratios as ratios
from cevian.domain.simplex.core import BarycentricPoint


class OptimizerResult(pydantic.BaseModel):
    """Outcome of a maximization.

    ``argmax`` is the scalar x for the 1-D problem, a point of the simplex otherwise.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    argmax: float | BarycentricPoint
    value: float
    iterations: int
    restarts_used: int
    converged: bool
    first_order_residual: float
    residual_tol: float
    distinct_optima: tuple[tuple[float, ...], ...] = ()
    """Every distinct converged restart optimum, rounded."""

    @pydantic.model_validator(mode="after")
    def _check_convergence(self) -> OptimizerResult:
        if self.converged and not self.first_order_residual <= self.residual_tol:
            raise ValueError("A converged result must meet its residual tolerance")
        return self


class Maximizer(metaclass=abc.ABCMeta):
    """Maximize an objective of the extremal problem in dimension n."""

    def __init__(self, n: int):
        self._n = n

    @abc.abstractmethod
    def maximize(self) -> OptimizerResult:
        """Do the optimization and return the best point found."""


def F(point: BarycentricPoint) -> float:
    """Ratio of the corner opposite the last vertex.

    F(lambda) = lambda_{n+1} prod_{i<=n} lambda_i/(1-lambda_i).
    """
    return ratios.corner_ratio(point, point.n)


def symmetric_point(x: float, n: int) -> BarycentricPoint:
    """Return (x, ..., x, 1 - nx)."""
    return BarycentricPoint(weights=(x,) * n + (1.0 - n * x,))


def first_order_residual(point: BarycentricPoint) -> float:
    """Sup-norm of the gradient of log F in the coordinates lambda = softmax(u).

    With g = grad_lambda log F, the gradient in u is
    lambda_j (g_j - sum_k lambda_k g_k); it vanishes exactly at the stationary
    points of F on the open simplex.
    """
    weights = point.array
    gradient = np.empty_like(weights)
    gradient[:-1] = 1.0 / weights[:-1] + 1.0 / (1.0 - weights[:-1])
    gradient[-1] = 1.0 / weights[-1]
    return float(np.max(np.abs(weights * (gradient - weights @ gradient))))
