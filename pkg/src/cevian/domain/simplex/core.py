"""The geometry kernel: barycentric points, simplices and cevian configurations."""
from __future__ import annotations

import math
from typing import Any

import numpy as np
import numpy.typing as npt
import pydantic

from cevian.domain.errors import (
    DegenerateSimplex,
    DimensionMismatch,
    IndexOutOfRange,
    NotInterior,
    UnsupportedDimension,
)

EPS_BOUNDARY = 1e-9
"""Smallest weight an interior point may carry."""
DELTA_DEGENERACY = 1e-9
"""Relative guard: |det(A_i - A_{n+1})| must exceed this times (max edge)^n."""
MIN_AFFINE_DET = 1e-6
"""Smallest |det| accepted for the linear part of an affine map."""

Vector = tuple[float, ...]


def _as_tuple(array: npt.ArrayLike) -> Vector:
    return tuple(float(value) for value in np.asarray(array, dtype=float).ravel())


class BarycentricPoint(pydantic.BaseModel):
    """Weights of a point with respect to the n+1 vertices of an n-simplex.

    The weights are renormalized to sum to 1. An interior point has every weight
    >= EPS_BOUNDARY. A point of a facet (a cevian foot) carries ``facet``, the
    index of the vertex whose weight is exactly 0; the other weights must still
    be >= EPS_BOUNDARY.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    weights: Vector
    facet: int | None = None

    @pydantic.model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        weights = np.array(data.get("weights", ()), dtype=float)
        if weights.ndim != 1 or weights.size < 3:
            raise UnsupportedDimension(
                f"A point of an n-simplex needs n+1 >= 3 weights, got {weights.shape}"
            )
        facet = data.get("facet")
        if facet is not None:
            if not 0 <= facet < weights.size:
                raise IndexOutOfRange(f"facet {facet} out of 0..{weights.size - 1}")
            weights[facet] = 0.0
        total = weights.sum()
        if not np.all(np.isfinite(weights)) or total <= 0.0:
            raise NotInterior(f"Weights {weights.tolist()} don't define a point")
        weights = weights / total
        free = np.delete(weights, facet) if facet is not None else weights
        if np.any(free < EPS_BOUNDARY):
            raise NotInterior(
                f"Weights {weights.tolist()} are not all >= {EPS_BOUNDARY}"
            )
        return {**data, "weights": _as_tuple(weights)}

    @classmethod
    def centroid(cls, n: int) -> BarycentricPoint:
        """Return the centroid of an n-simplex."""
        return cls(weights=(1.0 / (n + 1),) * (n + 1))

    @property
    def n(self) -> int:
        """Dimension of the simplex the point refers to."""
        return len(self.weights) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.weights)


def _edge_scale(points: np.ndarray) -> np.ndarray:
    """Longest distance between two of the points, for a stack of point sets."""
    differences = points[..., :, np.newaxis, :] - points[..., np.newaxis, :, :]
    return np.sqrt((differences**2).sum(axis=-1)).max(axis=(-2, -1))


def _determinants(points: np.ndarray) -> np.ndarray:
    """det(P_i - P_{n+1}) of a stack of n+1 points of R^n."""
    return np.linalg.det(points[..., :-1, :] - points[..., -1:, :])


def nondegenerate(points: npt.ArrayLike) -> np.ndarray:
    """Whether each simplex of a (..., n+1, n) stack passes the degeneracy guard."""
    points = np.asarray(points, dtype=float)
    n = points.shape[-1]
    return np.abs(_determinants(points)) > DELTA_DEGENERACY * _edge_scale(points) ** n


def _check_nondegenerate(points: np.ndarray) -> None:
    if not nondegenerate(points):
        raise DegenerateSimplex(
            f"|det| = {abs(_determinants(points)):.3e} below the guard"
            f" for edge scale {_edge_scale(points):.3e}"
        )


class CartesianSimplex(pydantic.BaseModel):
    """An n-simplex given by its n+1 vertices in R^n."""

    model_config = pydantic.ConfigDict(frozen=True)

    vertices: tuple[Vector, ...]

    @pydantic.model_validator(mode="after")
    def _check_vertices(self) -> CartesianSimplex:
        n = len(self.vertices) - 1
        if n < 2:
            raise UnsupportedDimension(f"Simplices need n >= 2, got n = {n}")
        if any(len(vertex) != n for vertex in self.vertices):
            raise DimensionMismatch(f"{n + 1} vertices must live in R^{n}")
        _check_nondegenerate(self.array)
        return self

    @classmethod
    def from_array(cls, vertices: npt.ArrayLike) -> CartesianSimplex:
        """Create a simplex from a (n+1, n) array."""
        return cls(
            vertices=tuple(_as_tuple(row) for row in np.asarray(vertices, dtype=float))
        )

    @classmethod
    def standard(cls, n: int) -> CartesianSimplex:
        """The right-angled simplex 0, e_1, ..., e_n (volume 1/n!)."""
        return cls.from_array(np.vstack([np.eye(n), np.zeros(n)]))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vertices)

    @property
    def max_edge_length(self) -> float:
        return float(_edge_scale(self.array))


def simplex_volume(points: npt.ArrayLike) -> float:
    """Unsigned volume of the simplex spanned by n+1 points of R^n, without guard."""
    points = np.asarray(points, dtype=float)
    n = points.shape[-1]
    if points.shape != (n + 1, n):
        raise DimensionMismatch(f"Expected {n + 1} points of R^{n}, got {points.shape}")
    return float(simplex_volumes(points))


def simplex_volumes(points: np.ndarray) -> np.ndarray:
    """Unsigned volumes of a (..., n+1, n) stack of simplices."""
    return np.abs(_determinants(points)) / math.factorial(points.shape[-1])


def volume(simplex: CartesianSimplex) -> float:
    """Return (1/n!)|det(A_i - A_{n+1})|."""
    points = simplex.array
    _check_nondegenerate(points)
    return simplex_volume(points)


def to_cartesian(point: BarycentricPoint, simplex: CartesianSimplex) -> np.ndarray:
    """Return sum(lambda_i A_i)."""
    if point.n != simplex.dim:
        raise DimensionMismatch(
            f"{point.n + 1} weights for a simplex with {simplex.dim + 1} vertices"
        )
    return point.array @ simplex.array


def to_barycentric(
    point: npt.ArrayLike, simplex: CartesianSimplex
) -> BarycentricPoint:
    """Solve [vertices as columns; ones] . lambda = (p, 1) for an interior point p."""
    point = np.asarray(point, dtype=float)
    if point.shape != (simplex.dim,):
        raise DimensionMismatch(
            f"Point of shape {point.shape} for a simplex of R^{simplex.dim}"
        )
    system = np.vstack([simplex.array.T, np.ones(simplex.dim + 1)])
    try:
        weights = np.linalg.solve(system, np.append(point, 1.0))
    except np.linalg.LinAlgError as e:
        raise DegenerateSimplex(str(e)) from e
    if np.any(weights <= EPS_BOUNDARY):
        raise NotInterior(f"{point.tolist()} has weights {weights.tolist()}")
    return BarycentricPoint(weights=_as_tuple(weights))


def cevian_foot(i: int, point: BarycentricPoint) -> BarycentricPoint:
    """Return N_i, where the line A_i M meets the facet opposite A_i."""
    if not 0 <= i <= point.n:
        raise IndexOutOfRange(f"Vertex {i} out of 0..{point.n}")
    if point.facet is not None:
        raise NotInterior("Cevian feet are defined for interior points only")
    return BarycentricPoint(weights=_as_tuple(feet_weights(point.array)[i]), facet=i)


def feet_weights(weights: np.ndarray) -> np.ndarray:
    """Weights of the cevian feet of a (..., n+1) stack of interior weights.

    Row i of the (..., n+1, n+1) result is N_i: lambda with lambda_i set to 0,
    divided by 1 - lambda_i.
    """
    size = weights.shape[-1]
    feet = np.repeat(weights[..., np.newaxis, :], size, axis=-2)
    feet[..., np.arange(size), np.arange(size)] = 0.0
    return feet / (1.0 - weights)[..., np.newaxis]


def collinearity_residuals(
    vertices: np.ndarray, m_cart: np.ndarray, feet_cart: np.ndarray
) -> np.ndarray:
    """Largest distance from M to a line A_i N_i, relative to the edge scale."""
    direction = feet_cart - vertices
    offset = m_cart[..., np.newaxis, :] - vertices
    t = (offset * direction).sum(axis=-1) / (direction**2).sum(axis=-1)
    distances = np.linalg.norm(offset - t[..., np.newaxis] * direction, axis=-1)
    return distances.max(axis=-1) / _edge_scale(vertices)


def segment_ratio_residuals(
    weights: np.ndarray, r: np.ndarray, s: np.ndarray
) -> np.ndarray:
    """Largest relative gap between s_i / R_i and lambda_i / (1 - lambda_i)."""
    expected = weights / (1.0 - weights)
    return (np.abs(s / r - expected) / expected).max(axis=-1)


class CevianConfiguration(pydantic.BaseModel):
    """A simplex, an interior point M and its cevian feet N_i.

    ``r`` holds the lengths R_i = |MA_i| and ``s`` the lengths s_i = |MN_i|.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    simplex: CartesianSimplex
    m_bary: BarycentricPoint
    m_cart: Vector
    feet_bary: tuple[BarycentricPoint, ...]
    feet_cart: tuple[Vector, ...]
    r: Vector
    s: Vector

    @property
    def n(self) -> int:
        return self.simplex.dim

    @property
    def feet_array(self) -> np.ndarray:
        return np.array(self.feet_cart)

    def collinearity_residual(self) -> float:
        return float(
            collinearity_residuals(
                self.simplex.array, np.array(self.m_cart), self.feet_array
            )
        )

    def segment_ratio_residual(self) -> float:
        return float(
            segment_ratio_residuals(
                self.m_bary.array, np.array(self.r), np.array(self.s)
            )
        )


def build_configuration(
    simplex: CartesianSimplex, point: BarycentricPoint
) -> CevianConfiguration:
    """Compute M, its cevian feet and the segment lengths."""
    m_cart = to_cartesian(point, simplex)
    feet = tuple(cevian_foot(i, point) for i in range(point.n + 1))
    feet_cart = feet_weights(point.array) @ simplex.array
    return CevianConfiguration(
        simplex=simplex,
        m_bary=point,
        m_cart=_as_tuple(m_cart),
        feet_bary=feet,
        feet_cart=tuple(_as_tuple(foot) for foot in feet_cart),
        r=_as_tuple(np.linalg.norm(simplex.array - m_cart, axis=1)),
        s=_as_tuple(np.linalg.norm(feet_cart - m_cart, axis=1)),
    )


def apply_affine(
    simplex: CartesianSimplex, matrix: npt.ArrayLike, offset: npt.ArrayLike
) -> CartesianSimplex:
    """Map every vertex by x -> matrix . x + offset."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (simplex.dim, simplex.dim):
        raise DimensionMismatch(f"Linear part of shape {matrix.shape}")
    if abs(np.linalg.det(matrix)) < MIN_AFFINE_DET:
        raise DegenerateSimplex("The affine map is (numerically) singular")
    return CartesianSimplex.from_array(
        simplex.array @ matrix.T + np.asarray(offset, dtype=float)
    )
