"""Implementations of the maximizers of the extremal problem."""
from __future__ import annotations

import concurrent.futures
import logging
import math
from typing import NamedTuple

import more_itertools
import numpy as np
import scipy.optimize

import cevian.domain.verification.sampling as sampling
import cevian.domain.optimizer.model as opt_model
import cevian.domain.optimizer.objective as objective
from cevian.domain.errors import (
    CevianError,
    ConvergenceFailure,
    InvalidSetting,
    UnsupportedDimension,
)
from cevian.domain.simplex.core import BarycentricPoint

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2
ITERATION_CAP = 10_000
DOMAIN_MARGIN = 1e-12
DEFAULT_TOL = 1e-10
DEFAULT_RESTARTS = 16
SIMPLEX_RESIDUAL_TOL = 1e-5
POLISH_ROUNDS = 4
OPTIMA_DECIMALS = 6


def _check_arguments(n: int, tol: float) -> None:
    if n < 2:
        raise UnsupportedDimension(f"n must be >= 2, got {n}")
    if not tol > 0.0:
        raise InvalidSetting(f"tol must be positive, got {tol}")


class GoldenSectionMaximizer(opt_model.Maximizer):
    """Maximize f on (0, 1/n).

    Golden-section search brackets the maximum, then bisection on the sign of f'
    shrinks the bracket to ``tol``. The first-order residual is the final width of
    the bracket across which f' changes sign.
    """

    def __init__(self, n: int, tol: float = DEFAULT_TOL):
        _check_arguments(n, tol)
        super().__init__(n)
        self._tol = tol
        self._iterations = 0

    def _tick(self) -> None:
        self._iterations += 1
        if self._iterations > ITERATION_CAP:
            raise ConvergenceFailure(
                f"No convergence to {self._tol} in {ITERATION_CAP} iterations"
            )

    def _golden_section(self, a: float, b: float, width: float) -> tuple[float, float]:
        # compares log f: same argmax, no underflow for large n
        n = self._n
        c = a + INV_PHI_SQUARE * (b - a)
        d = a + INV_PHI * (b - a)
        yc = objective.log_f(c, n)
        yd = objective.log_f(d, n)
        while b - a > width:
            self._tick()
            if yc > yd:
                b, d, yd = d, c, yc
                c = a + INV_PHI_SQUARE * (b - a)
                yc = objective.log_f(c, n)
            else:
                a, c, yc = c, d, yd
                d = a + INV_PHI * (b - a)
                yd = objective.log_f(d, n)
        return a, b

    def _bisect(self, a: float, b: float) -> tuple[float, float]:
        n = self._n
        if not objective.log_f_prime(a, n) > 0.0 > objective.log_f_prime(b, n):
            logger.debug("Golden-section bracket lost the sign change, restarting")
            a, b = DOMAIN_MARGIN, 1.0 / n - DOMAIN_MARGIN
        while b - a > self._tol:
            self._tick()
            middle = (a + b) / 2
            slope = objective.log_f_prime(middle, n)
            if slope > 0.0:
                a = middle
            elif slope < 0.0:
                b = middle
            else:
                return middle, middle
        return a, b

    def maximize(self) -> opt_model.OptimizerResult:
        n = self._n
        self._iterations = 0
        low, high = DOMAIN_MARGIN, 1.0 / n - DOMAIN_MARGIN
        low, high = self._golden_section(low, high, max(self._tol, 1e-6 / n))
        low, high = self._bisect(low, high)
        argmax = (low + high) / 2
        logger.info(
            "f maximized for n=%d at x=%.15g in %d iterations",
            n,
            argmax,
            self._iterations,
        )
        return opt_model.OptimizerResult(
            argmax=argmax,
            value=objective.f(argmax, n),
            iterations=self._iterations,
            restarts_used=1,
            converged=True,
            first_order_residual=high - low,
            residual_tol=self._tol,
        )


class _RestartOutcome(NamedTuple):
    index: int
    point: BarycentricPoint | None
    value: float
    iterations: int
    converged: bool
    residual: float


class NelderMeadMaximizer(opt_model.Maximizer):
    """Maximize F over the open simplex with multi-start Nelder-Mead.

    The weights are lambda = softmax(u_1, ..., u_n, 0), which removes the simplex
    constraint; u_{n+1} is pinned to 0 since softmax is shift invariant. Each
    restart minimizes -log F (same minimizer as -F, better scaled) from a random u
    drawn from the substream (seed, restart index).
    """

    def __init__(
        self,
        n: int,
        restarts: int = DEFAULT_RESTARTS,
        tol: float = DEFAULT_TOL,
        seed: int = 0,
        workers: int = 1,
    ):
        _check_arguments(n, tol)
        if restarts < 1:
            raise InvalidSetting(f"restarts must be >= 1, got {restarts}")
        super().__init__(n)
        self._restarts = restarts
        self._tol = tol
        self._seed = seed
        self._workers = workers

    @staticmethod
    def _to_weights(u: np.ndarray) -> np.ndarray:
        z = np.append(u, 0.0)
        z = np.exp(z - z.max())
        return z / z.sum()

    def _cost(self, u: np.ndarray) -> float:
        weights = self._to_weights(u)
        if np.any(weights <= 0.0) or np.any(weights >= 1.0):
            return math.inf
        head = weights[:-1]
        return -float(math.log(weights[-1]) + np.sum(np.log(head) - np.log1p(-head)))

    def _run_restart(self, index: int) -> _RestartOutcome:
        stream = sampling.substream(self._seed, index)
        u = stream.normal(size=self._n)
        best = math.inf
        iterations = 0
        success = False
        # Nelder-Mead may stall on a collapsed simplex; restarting from its
        # last point rebuilds it.
        for _ in range(POLISH_ROUNDS):
            result = scipy.optimize.minimize(
                self._cost,
                u,
                method="Nelder-Mead",
                options={
                    "xatol": self._tol,
                    "fatol": 1e-12,
                    "maxiter": ITERATION_CAP - iterations,
                    "maxfev": 4 * ITERATION_CAP,
                    "adaptive": self._n > 4,
                },
            )
            iterations += int(result.nit)
            success = bool(result.success)
            u = result.x
            improved = result.fun < best - 1e-15
            best = min(best, float(result.fun))
            if not improved or not success or iterations >= ITERATION_CAP:
                break
        try:
            point = BarycentricPoint(weights=tuple(self._to_weights(u).tolist()))
        except CevianError:
            logger.debug("Restart %d ended on the boundary", index)
            return _RestartOutcome(index, None, 0.0, iterations, False, math.inf)
        residual = opt_model.first_order_residual(point)
        converged = success and residual <= SIMPLEX_RESIDUAL_TOL
        logger.debug(
            "Restart %d: F=%.15g residual=%.3e converged=%s",
            index,
            opt_model.F(point),
            residual,
            converged,
        )
        return _RestartOutcome(
            index, point, opt_model.F(point), iterations, converged, residual
        )

    def maximize(self) -> opt_model.OptimizerResult:
        if self._workers > 1:
            with concurrent.futures.ThreadPoolExecutor(self._workers) as executor:
                outcomes = list(executor.map(self._run_restart, range(self._restarts)))
        else:
            outcomes = [self._run_restart(index) for index in range(self._restarts)]
        converged = [outcome for outcome in outcomes if outcome.converged]
        if not converged:
            raise ConvergenceFailure(
                f"None of the {self._restarts} restarts converged for n={self._n}"
            )
        best = max(converged, key=lambda outcome: (outcome.value, -outcome.index))
        assert best.point is not None
        distinct_optima = tuple(
            more_itertools.unique_everseen(
                tuple(
                    round(weight, OPTIMA_DECIMALS) for weight in outcome.point.weights
                )
                for outcome in converged
                if outcome.point is not None
            )
        )
        if len(distinct_optima) > 1:
            logger.warning(
                "%d distinct optima for n=%d: %s",
                len(distinct_optima),
                self._n,
                distinct_optima,
            )
        logger.info(
            "F maximized for n=%d: %d/%d restarts converged, best F=%.15g",
            self._n,
            len(converged),
            self._restarts,
            best.value,
        )
        return opt_model.OptimizerResult(
            argmax=best.point,
            value=best.value,
            iterations=sum(outcome.iterations for outcome in outcomes),
            restarts_used=len(outcomes),
            converged=True,
            first_order_residual=best.residual,
            residual_tol=SIMPLEX_RESIDUAL_TOL,
            distinct_optima=distinct_optima,
        )


def maximize_f_1d(n: int, tol: float = DEFAULT_TOL) -> opt_model.OptimizerResult:
    """Maximize f(x) = (x/(1-x))^n (1-nx) on (0, 1/n)."""
    return GoldenSectionMaximizer(n, tol).maximize()


def maximize_F_simplex(
    n: int,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    workers: int = 1,
) -> opt_model.OptimizerResult:
    """Maximize F over the open standard n-simplex."""
    return NelderMeadMaximizer(n, restarts, tol, seed, workers).maximize()
