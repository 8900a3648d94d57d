"""Tests of the random streams and samplers."""
import numpy as np
import pytest
import scipy.stats

import cevian.domain.verification.sampling as sampling
from cevian.domain.errors import SamplingFailure
from cevian.domain.simplex.core import MIN_AFFINE_DET


def test_substreams_are_keyed():
    first = sampling.substream(42, 7).random(5)
    assert np.array_equal(first, sampling.substream(42, 7).random(5))
    assert not np.array_equal(first, sampling.substream(42, 8).random(5))
    assert not np.array_equal(first, sampling.substream(43, 7).random(5))


def test_sample_interior(stream):
    for n in range(2, 7):
        point = sampling.sample_interior(n, stream, min_weight=1e-6)
        assert point.n == n
        assert sum(point.weights) == pytest.approx(1.0)
        assert min(point.weights) >= 1e-6


def test_sample_interior_is_uniform(stream):
    """A weight of a uniform point of the triangle follows Beta(1, 2)."""
    samples = [sampling.sample_interior(2, stream).weights[0] for _ in range(2000)]
    assert scipy.stats.kstest(samples, "beta", args=(1, 2)).pvalue > 1e-4


def test_sample_interior_gives_up(stream):
    # no point of the triangle has every weight above 1/3
    with pytest.raises(SamplingFailure):
        sampling.sample_interior(2, stream, min_weight=0.4)


def test_random_simplex(stream):
    for n in range(2, 6):
        simplex = sampling.random_simplex(n, stream, max_condition=100.0)
        edges = simplex.array[:-1] - simplex.array[-1]
        assert simplex.dim == n
        assert np.linalg.cond(edges) <= 100.0
        assert np.all(np.abs(simplex.array) <= 1.0)


def test_random_affine_map(stream):
    matrix, offset = sampling.random_affine_map(3, stream, max_condition=1e3)
    assert matrix.shape == (3, 3)
    assert offset.shape == (3,)
    assert abs(np.linalg.det(matrix)) >= MIN_AFFINE_DET
    assert np.linalg.cond(matrix) <= 1e3


def test_substream_keys_are_limited():
    sampling.substream(1, 2, 3, 4)
    with pytest.raises(SamplingFailure):
        sampling.substream(1, 2, 3, 4, 5)


def test_draw_accepted_matches_one_by_one_rejection():
    draw = sampling.weights_draw(2)
    accept = sampling.weights_accept(0.1)
    samples, pending = sampling.draw_accepted(
        [sampling.substream(5, trial) for trial in range(50)], draw, accept
    )
    assert pending.size == 0
    for trial, row in enumerate(samples):
        stream = sampling.substream(5, trial)
        expected = draw(stream)
        while not accept(expected):
            expected = draw(stream)
        assert np.array_equal(row, expected)


def test_draw_accepted_reports_hopeless_streams():
    streams = [sampling.substream(5, trial) for trial in range(3)]
    _, pending = sampling.draw_accepted(
        streams, sampling.weights_draw(2), sampling.weights_accept(0.4)
    )
    assert pending.tolist() == [0, 1, 2]
