"""General conftest."""
import numpy as np
import pytest

import cevian.domain.verification.sampling as sampling
from cevian.domain.simplex.core import BarycentricPoint, CartesianSimplex


@pytest.fixture
def stream() -> np.random.Generator:
    """A fixed stream, so every test draws the same numbers on every run."""
    return sampling.substream(1234)


@pytest.fixture
def triangle() -> CartesianSimplex:
    return CartesianSimplex(vertices=((0.0, 0.0), (4.0, 0.0), (1.0, 3.0)))


@pytest.fixture
def tetrahedron() -> CartesianSimplex:
    return CartesianSimplex(
        vertices=(
            (0.0, 0.0, 0.0),
            (2.0, 0.0, 0.0),
            (0.5, 1.5, 0.0),
            (0.3, 0.4, 1.2),
        )
    )


@pytest.fixture
def skewed_point() -> BarycentricPoint:
    return BarycentricPoint(weights=(0.2, 0.3, 0.5))
