"""Random streams and samplers for the verification suites and the optimizer restarts."""
from __future__ import annotations

import functools
from typing import Callable, Sequence

import numpy as np

from cevian.domain.errors import SamplingFailure
from cevian.domain.simplex.core import (
    EPS_BOUNDARY,
    MIN_AFFINE_DET,
    BarycentricPoint,
    CartesianSimplex,
    nondegenerate,
)

MAX_REJECTIONS = 1000
MAX_KEYS = 3

Draw = Callable[[np.random.Generator], np.ndarray]
Accept = Callable[[np.ndarray], np.ndarray]


@functools.lru_cache(maxsize=64)
def _philox_key(seed: int) -> tuple[int, int]:
    high, low = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    return int(high), int(low)


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Return the Philox stream keyed by (seed, *keys).

    The seed sets the Philox key and the keys the high words of its counter, so
    trial i or restart i draws the same numbers whatever the order or the thread
    it runs on, and building a stream costs no hashing.
    """
    if len(keys) > MAX_KEYS:
        raise SamplingFailure(f"At most {MAX_KEYS} stream keys, got {len(keys)}")
    counter = np.zeros(4, dtype=np.uint64)
    if keys:
        counter[-len(keys) :] = keys
    key = np.array(_philox_key(seed), dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def draw_accepted(
    streams: Sequence[np.random.Generator], draw: Draw, accept: Accept
) -> tuple[np.ndarray, np.ndarray]:
    """Draw one sample per stream, redrawing rejected ones from their own stream.

    Return the stacked samples and the indices of the streams that were still
    rejected after MAX_REJECTIONS draws. Each stream sees the same draws as a
    one-by-one rejection loop would make.
    """
    samples = np.stack([draw(stream) for stream in streams])
    pending = np.flatnonzero(~accept(samples))
    for _ in range(MAX_REJECTIONS - 1):
        if pending.size == 0:
            break
        samples[pending] = np.stack([draw(streams[index]) for index in pending])
        pending = pending[~accept(samples[pending])]
    return samples, pending


def _single(
    stream: np.random.Generator, draw: Draw, accept: Accept, what: str
) -> np.ndarray:
    samples, rejected = draw_accepted([stream], draw, accept)
    if rejected.size:
        raise SamplingFailure(f"{MAX_REJECTIONS} consecutive rejections of {what}")
    return samples[0]


def weights_draw(n: int) -> Draw:
    """Flat Dirichlet weights, as normalized exponentials."""

    def draw(stream: np.random.Generator) -> np.ndarray:
        weights = stream.standard_exponential(n + 1)
        return weights / weights.sum()

    return draw


def weights_accept(min_weight: float) -> Accept:
    def accept(weights: np.ndarray) -> np.ndarray:
        return weights.min(axis=-1) >= min_weight

    return accept


def vertices_draw(n: int) -> Draw:
    """n+1 vertices uniform in [-1, 1]^n."""

    def draw(stream: np.random.Generator) -> np.ndarray:
        return stream.uniform(-1.0, 1.0, size=(n + 1, n))

    return draw


def vertices_accept(max_condition: float | None) -> Accept:
    """The degeneracy guard, and a bound on the condition number of the edge matrix.

    The condition number bounds the error of determinant volumes.
    """

    def accept(vertices: np.ndarray) -> np.ndarray:
        accepted = nondegenerate(vertices)
        if max_condition is not None:
            edges = vertices[..., :-1, :] - vertices[..., -1:, :]
            accepted &= np.linalg.cond(edges) <= max_condition
        return accepted

    return accept


def affine_draw(n: int) -> Draw:
    """A normal (n, n) linear part stacked over a uniform offset in [-1, 1]^n."""

    def draw(stream: np.random.Generator) -> np.ndarray:
        matrix = stream.normal(size=(n, n))
        offset = stream.uniform(-1.0, 1.0, size=n)
        return np.vstack([matrix, offset])

    return draw


def affine_accept(max_condition: float) -> Accept:
    def accept(maps: np.ndarray) -> np.ndarray:
        matrices = maps[..., :-1, :]
        return (np.abs(np.linalg.det(matrices)) >= MIN_AFFINE_DET) & (
            np.linalg.cond(matrices) <= max_condition
        )

    return accept


def sample_interior(
    n: int, stream: np.random.Generator, min_weight: float = EPS_BOUNDARY
) -> BarycentricPoint:
    """Draw a point uniformly in the open n-simplex, every weight >= ``min_weight``."""
    weights = _single(
        stream,
        weights_draw(n),
        weights_accept(min_weight),
        f"weight vectors below {min_weight}",
    )
    return BarycentricPoint(weights=tuple(weights.tolist()))


def random_simplex(
    n: int, stream: np.random.Generator, max_condition: float | None = None
) -> CartesianSimplex:
    """Draw vertices uniformly in [-1, 1]^n until the simplex passes the degeneracy guard.

    With ``max_condition`` the edge matrix must also have a condition number below it.
    """
    vertices = _single(
        stream, vertices_draw(n), vertices_accept(max_condition), "degenerate simplices"
    )
    return CartesianSimplex.from_array(vertices)


def random_affine_map(
    n: int, stream: np.random.Generator, max_condition: float
) -> tuple[np.ndarray, np.ndarray]:
    """Draw (matrix, offset) with |det(matrix)| >= MIN_AFFINE_DET and a bounded condition number."""
    sample = _single(
        stream, affine_draw(n), affine_accept(max_condition), "ill-conditioned maps"
    )
    return sample[:-1], sample[-1]
