"""Seeded randomized suites confronting the closed forms with determinant volumes.

Every trial draws a well-conditioned simplex and an interior point from the
substream (seed, trial index). Trials run in chunks: the configurations of a
chunk are stacked in numpy arrays, one row per trial, and every check of the
suite is evaluated on the whole stack. A check returns a margin per trial: how
far past its tolerance it went, a violation when > 0.
"""
from __future__ import annotations

import concurrent.futures
import functools
import hashlib
import logging
import math
import time
from typing import Callable, Iterable, NamedTuple

import more_itertools
import numpy as np

import cevian.domain.optimizer.model as opt_model
import cevian.domain.simplex.constants as constants
import cevian.domain.simplex.core as core
import cevian.domain.simplex.ratios as ratios
import cevian.domain.verification.sampling as sampling
from cevian.domain.verification.model import (
    Suite,
    TrialPlan,
    VerificationReport,
    Violation,
)

logger = logging.getLogger(__name__)

INEQUALITY_SLACK = 1e-12
"""Absolute slack, on the ratio scale, of the inequality checks."""
PROBE_TOL = 1e-12
MOEBIUS_RESIDUAL_TOL = 1e-10
"""|4pqr - x^2(p+q+r+x)| must stay below this times S^3."""
MAX_CONDITION = 1e3
"""Largest condition number of a sampled edge matrix or affine map."""
ORACLE_MIN_WEIGHT = 1e-4
"""Smallest sampled weight; flatter cevian simplices lose digits in determinants."""
CHUNK_SIZE = 1_000

Margins = dict[str, float]


class TrialBatch(NamedTuple):
    """The cevian configurations of a chunk of trials, one row per trial."""

    trials: np.ndarray
    vertices: np.ndarray
    """(T, n+1, n)"""
    weights: np.ndarray
    """(T, n+1), the weights of M."""
    m_cart: np.ndarray
    feet_cart: np.ndarray
    """(T, n+1, n), row i is N_i."""
    maps: np.ndarray | None
    """(T, n+1, n), linear part over offset; the affine suite only."""
    failed: np.ndarray
    """Trials whose sampler kept rejecting; their rows hold a placeholder."""


class ChunkChecks(NamedTuple):
    margins: dict[str, np.ndarray]
    ratios: np.ndarray
    """The ratio the suite tracks the maximum of, per trial."""


def _relative_error(value: np.ndarray, reference: np.ndarray) -> np.ndarray:
    return np.abs(value - reference) / np.abs(reference)


def _configurations(
    vertices: np.ndarray, weights: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """M and the feet N_i, in Cartesian coordinates."""
    m_cart = np.einsum("...i,...ij->...j", weights, vertices)
    return m_cart, core.feet_weights(weights) @ vertices


def _measured_ratios(vertices: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Determinant ratios: cevian simplex first, then corners 0..n, per row.

    Corner k is the simplex M, {N_i}_{i != k}; its edges are taken from M.
    """
    n = vertices.shape[-1]
    m_cart, feet = _configurations(vertices, weights)
    others = np.array([[i for i in range(n + 1) if i != k] for k in range(n + 1)])
    apex = np.broadcast_to(
        m_cart[..., np.newaxis, np.newaxis, :], feet.shape[:-2] + (n + 1, 1, n)
    )
    corners = np.concatenate([feet[..., others, :], apex], axis=-2)
    volumes = np.concatenate(
        [core.simplex_volumes(feet)[..., np.newaxis], core.simplex_volumes(corners)],
        axis=-1,
    )
    return volumes / core.simplex_volumes(vertices)[..., np.newaxis]


def _check_theorem1(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    n, weights = plan.n, batch.weights
    measured = core.simplex_volumes(batch.feet_cart) / core.simplex_volumes(
        batch.vertices
    )
    bounds = (1.0 - weights) / float(n) ** (n + 1)
    per_corner = ratios.corner_ratios_of(weights) - bounds
    return ChunkChecks(
        {
            "theorem1_bound": measured - ratios.theorem1_bound(n) - INEQUALITY_SLACK,
            "per_corner_bound": per_corner.max(axis=-1) - INEQUALITY_SLACK,
            "cevian_oracle": _relative_error(
                measured, ratios.cevian_ratios_of(weights)
            )
            - plan.tol,
        },
        measured,
    )


def _check_theorem2(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    # F is the corner opposite the last vertex
    value = ratios.corner_ratios_of(batch.weights)[:, plan.n]
    measured = _measured_ratios(batch.vertices, batch.weights)[:, 1 + plan.n]
    return ChunkChecks(
        {
            "theorem2_bound": value - ratios.theorem2_value(plan.n) - INEQUALITY_SLACK,
            "corner_oracle": _relative_error(measured, value) - plan.tol,
        },
        value,
    )


def _check_eq2(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    measured = _measured_ratios(batch.vertices, batch.weights)[:, 1:]
    closed = ratios.corner_ratios_of(batch.weights)
    return ChunkChecks(
        {
            "corner_oracle": _relative_error(measured, closed).max(axis=-1)
            - plan.tol,
        },
        closed.max(axis=-1),
    )


def _check_decomposition(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    measured = _measured_ratios(batch.vertices, batch.weights)
    closed_corners = ratios.corner_ratios_of(batch.weights)
    closed = ratios.cevian_ratios_of(batch.weights)
    return ChunkChecks(
        {
            "closed_decomposition": _relative_error(
                closed_corners.sum(axis=-1), closed
            )
            - ratios.DECOMPOSITION_RTOL,
            "measured_decomposition": _relative_error(
                measured[:, 1:].sum(axis=-1), measured[:, 0]
            )
            - plan.tol,
        },
        closed,
    )


_NEXT_TWO = np.array([[1, 2], [2, 0], [0, 1]])


def _check_moebius(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    vertices = batch.vertices
    feet = batch.feet_cart
    area = core.simplex_volumes(vertices)
    # corner k is A_k, N_{k+1}, N_{k+2}
    corners = np.concatenate(
        [vertices[:, :, np.newaxis, :], feet[:, _NEXT_TWO, :]], axis=-2
    )
    measured = np.concatenate(
        [core.simplex_volumes(corners), core.simplex_volumes(feet)[:, np.newaxis]],
        axis=-1,
    )
    closed = ratios.moebius_parts(batch.weights, area)
    p, q, r, x = measured.T
    return ChunkChecks(
        {
            "partition": _relative_error(measured.sum(axis=-1), area)
            - ratios.MOEBIUS_RTOL,
            "moebius_relation": np.abs(ratios.moebius_residual_of(p, q, r, x))
            / area**3
            - MOEBIUS_RESIDUAL_TOL,
            "area_oracle": _relative_error(measured, closed).max(axis=-1) - plan.tol,
            "amgm": -ratios.amgm_slack_of(p, q, r, x) / area**4 - INEQUALITY_SLACK,
            "quarter_bound": x / area - 0.25 - INEQUALITY_SLACK,
        },
        x / area,
    )


def _check_affine(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    assert batch.maps is not None
    matrices, offsets = batch.maps[:, :-1, :], batch.maps[:, -1, :]
    image = batch.vertices @ np.swapaxes(matrices, -1, -2) + offsets[:, np.newaxis, :]
    before = _measured_ratios(batch.vertices, batch.weights)
    after = _measured_ratios(image, batch.weights)
    margins = _relative_error(after, before).max(axis=-1) - plan.tol
    degenerate = ~core.nondegenerate(image)
    return ChunkChecks(
        {
            "affine_invariance": np.where(degenerate, -math.inf, margins),
            "degenerate_image": np.where(degenerate, math.inf, -math.inf),
        },
        before[:, 0],
    )


def _check_segment_ratio(batch: TrialBatch, plan: TrialPlan) -> ChunkChecks:
    m_cart = batch.m_cart[:, np.newaxis, :]
    r = np.linalg.norm(batch.vertices - m_cart, axis=-1)
    s = np.linalg.norm(batch.feet_cart - m_cart, axis=-1)
    return ChunkChecks(
        {
            "segment_ratio": core.segment_ratio_residuals(batch.weights, r, s)
            - plan.tol,
            "collinearity": core.collinearity_residuals(
                batch.vertices, batch.m_cart, batch.feet_cart
            )
            - plan.tol,
        },
        (s / r).max(axis=-1),
    )


def _probe_centroid(n: int) -> Margins:
    """The cevian simplex of the centroid reaches n^-n."""
    centroid = core.BarycentricPoint.centroid(n)
    simplex = core.CartesianSimplex.standard(n)
    bound = ratios.theorem1_bound(n)
    measured = _measured_ratios(simplex.array, centroid.array)[0]
    return {
        "centroid_closed_form": abs(ratios.cevian_ratio(centroid) - bound) - PROBE_TOL,
        "centroid_determinant": abs(float(measured) - bound) - PROBE_TOL,
    }


def _probe_maximizer(n: int) -> Margins:
    """F reaches f(theta_n) at (theta_n, ..., theta_n, 1 - n theta_n)."""
    point = opt_model.symmetric_point(constants.theta(n), n)
    return {
        "maximizer": abs(opt_model.F(point) - ratios.theorem2_value(n)) - PROBE_TOL
    }


def _no_probe(n: int) -> Margins:
    return {}


def _no_bound(n: int) -> float | None:
    return None


Check = Callable[[TrialBatch, TrialPlan], ChunkChecks]


class _SuiteDefinition(NamedTuple):
    check: Check
    bound: Callable[[int], float | None]
    probes: Callable[[int], Margins]


_SUITES: dict[Suite, _SuiteDefinition] = {
    Suite.THEOREM1: _SuiteDefinition(
        _check_theorem1, ratios.theorem1_bound, _probe_centroid
    ),
    Suite.THEOREM2: _SuiteDefinition(
        _check_theorem2, ratios.theorem2_value, _probe_maximizer
    ),
    Suite.EQ2: _SuiteDefinition(_check_eq2, _no_bound, _no_probe),
    Suite.DECOMPOSITION: _SuiteDefinition(
        _check_decomposition, _no_bound, _probe_centroid
    ),
    Suite.MOEBIUS: _SuiteDefinition(_check_moebius, lambda n: 0.25, _no_probe),
    Suite.AFFINE: _SuiteDefinition(_check_affine, _no_bound, _no_probe),
    Suite.SEGMENT_RATIO: _SuiteDefinition(_check_segment_ratio, _no_bound, _no_probe),
}


def _digest(plan: TrialPlan, trial: int, weights: np.ndarray) -> str:
    """Short hash of the trial inputs; (seed, trial) rebuilds them."""
    digest = hashlib.sha256(f"{plan.suite.value}:{plan.seed}:{trial}".encode())
    digest.update(weights.tobytes())
    return digest.hexdigest()[:16]


def sample_batch(plan: TrialPlan, trials: Iterable[int]) -> TrialBatch:
    """Draw the inputs of some trials, each from its substream (seed, trial)."""
    n = plan.n
    trials = np.fromiter(trials, dtype=np.int64)
    streams = [sampling.substream(plan.seed, int(trial)) for trial in trials]
    vertices, bad_vertices = sampling.draw_accepted(
        streams, sampling.vertices_draw(n), sampling.vertices_accept(MAX_CONDITION)
    )
    weights, bad_weights = sampling.draw_accepted(
        streams, sampling.weights_draw(n), sampling.weights_accept(ORACLE_MIN_WEIGHT)
    )
    rejected = [bad_vertices, bad_weights]
    maps = None
    if plan.suite is Suite.AFFINE:
        maps, bad_maps = sampling.draw_accepted(
            streams, sampling.affine_draw(n), sampling.affine_accept(MAX_CONDITION)
        )
        rejected.append(bad_maps)
    failed = np.zeros(trials.size, dtype=bool)
    failed[np.concatenate(rejected)] = True
    if failed.any():
        vertices[failed] = core.CartesianSimplex.standard(n).array
        weights[failed] = 1.0 / (n + 1)
        if maps is not None:
            maps[failed] = np.vstack([np.eye(n), np.zeros(n)])
    m_cart, feet_cart = _configurations(vertices, weights)
    return TrialBatch(trials, vertices, weights, m_cart, feet_cart, maps, failed)


class _ChunkSummary(NamedTuple):
    violations: list[Violation]
    worst_margin: float
    max_ratio: float


def _collect(trial: int, digest: str, margins: Margins) -> Iterable[Violation]:
    for check, margin in margins.items():
        if margin > 0.0:
            yield Violation(trial=trial, digest=digest, check=check, margin=margin)


def _run_chunk(plan: TrialPlan, trials: list[int]) -> _ChunkSummary:
    batch = sample_batch(plan, trials)
    with np.errstate(all="ignore"):
        checks = _SUITES[plan.suite].check(batch, plan)
    margins = {}
    for check, values in checks.margins.items():
        # a NaN margin is a failed check, not a pass
        values = np.where(np.isnan(values), math.inf, values)
        margins[check] = np.where(batch.failed, -math.inf, values)
    if batch.failed.any():
        margins["error"] = np.where(batch.failed, math.inf, -math.inf)
        for trial in batch.trials[batch.failed]:
            logger.warning(
                "Trial %d of %s failed: every draw was rejected",
                trial,
                plan.suite.value,
            )
    table = np.stack(list(margins.values()), axis=-1)
    violations: list[Violation] = []
    for row in np.flatnonzero((table > 0.0).any(axis=-1)):
        trial = int(batch.trials[row])
        violations.extend(
            _collect(
                trial,
                _digest(plan, trial, batch.weights[row]),
                dict(zip(margins, table[row].tolist())),
            )
        )
    trial_ratios = np.where(batch.failed, 0.0, checks.ratios)
    return _ChunkSummary(
        violations,
        float(table.max()),
        float(np.fmax.reduce(trial_ratios, initial=0.0)),
    )


def run_suite(plan: TrialPlan, workers: int = 1) -> VerificationReport:
    """Run the trials of a plan, in ``workers`` threads, and the suite's probes.

    The report doesn't depend on ``workers``: trial i always uses the substream
    (seed, i) and the aggregation is order independent.
    """
    start = time.perf_counter()
    definition = _SUITES[plan.suite]
    logger.info(
        "Running %s for n=%d: %d trials, seed %d",
        plan.suite.value,
        plan.n,
        plan.trials,
        plan.seed,
    )
    chunks = [
        list(chunk) for chunk in more_itertools.chunked(range(plan.trials), CHUNK_SIZE)
    ]
    run_chunk = functools.partial(_run_chunk, plan)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as executor:
            summaries = list(executor.map(run_chunk, chunks))
    else:
        summaries = [run_chunk(chunk) for chunk in chunks]

    probe_margins = definition.probes(plan.n)
    violations = list(_collect(-1, "probe", probe_margins))
    for summary in summaries:
        violations.extend(summary.violations)
    violations.sort(key=lambda violation: violation.trial)
    worst_margin = max(
        [*(summary.worst_margin for summary in summaries), *probe_margins.values()]
    )
    report = VerificationReport(
        plan=plan,
        violations=tuple(violations),
        worst_margin=worst_margin,
        max_ratio_observed=max(summary.max_ratio for summary in summaries),
        bound=definition.bound(plan.n),
        passed=not violations,
        elapsed=time.perf_counter() - start,
    )
    logger.info(
        "%s n=%d: %s, %d violations, worst margin %.3e",
        plan.suite.value,
        plan.n,
        "passed" if report.passed else "FAILED",
        len(violations),
        report.worst_margin,
    )
    return report
