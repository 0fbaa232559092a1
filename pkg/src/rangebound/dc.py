"""
Difference-of-Convex Bounds
============================
f = g - h with every component of g and h convex on a declared domain.
On a box X:

    convex φ ≥ tangent at t                 (lower bound of φ)
    convex φ ≤ affine over-estimator on X   (LP over the box vertices)

so  g_tan - h_over ≤ f ≤ g_over - h_tan  componentwise, both sides affine.
Vertex enumeration costs 2^n LP rows; above a dimension limit the bound is
refused with VertexLimitError instead of stalling.
"""

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from src.config import VALIDATION_SAMPLES
from src.errors import InvalidSplitError, VertexLimitError
from src.log import get_logger
from src.rangebound.expressions import SymbolicDynamics
from src.sets.operations import interval_hull, linear_map, minkowski_sum, support, translate
from src.sets.representations import IntervalVector, SetValue

log = get_logger("DC")

DEFAULT_VERTEX_LIMIT_DIM = 12
_MARGIN = 1e-12


@dataclass(frozen=True, eq=False)
class DCSplit:
    """Componentwise convex g, h with g - h = f on domain."""

    g: SymbolicDynamics
    h: SymbolicDynamics
    domain: IntervalVector

    def validate(
        self,
        f: SymbolicDynamics,
        samples: int = VALIDATION_SAMPLES,
        seed: int = 0,
        tol: float = 1e-8,
        u=None,
    ) -> None:
        """Sampled identity and midpoint-convexity checks; raises InvalidSplitError."""
        rng = np.random.default_rng(seed)
        lo, hi = self.domain.lower, self.domain.upper
        pts = rng.uniform(lo, hi, size=(samples, lo.size))
        diff = self.g.evaluate_batch(pts, u) - self.h.evaluate_batch(pts, u) - f.evaluate_batch(pts, u)
        if np.max(np.abs(diff)) > tol * max(1.0, float(np.max(np.abs(f.evaluate_batch(pts, u))))):
            raise InvalidSplitError(f"g - h differs from f by {np.max(np.abs(diff)):.3e}")

        a = rng.uniform(lo, hi, size=(samples, lo.size))
        b = rng.uniform(lo, hi, size=(samples, lo.size))
        mid = 0.5 * (a + b)
        for name, part in (("g", self.g), ("h", self.h)):
            fa, fb, fm = part.evaluate_batch(a, u), part.evaluate_batch(b, u), part.evaluate_batch(mid, u)
            gap = fm - 0.5 * (fa + fb)
            slack = tol * (1.0 + np.abs(fa) + np.abs(fb))
            bad = np.argwhere(gap > slack)
            if bad.size:
                k, i = bad[0]
                raise InvalidSplitError(
                    f"component {i + 1} of {name} is not convex on the segment {a[k]} -> {b[k]}"
                )


@dataclass(frozen=True, eq=False)
class AffineBound:
    """x ↦ slope·x + intercept, one row per component."""

    slope: np.ndarray
    intercept: np.ndarray

    def __call__(self, x) -> np.ndarray:
        return self.slope @ np.asarray(x, dtype=float) + self.intercept


@dataclass(frozen=True, eq=False)
class DCBounds:
    lower: AffineBound
    upper: AffineBound


def _tangent(part: SymbolicDynamics, t: np.ndarray, u) -> AffineBound:
    J = part.jacobian(t, u)
    return AffineBound(J, part.evaluate(t, u) - J @ t)


def box_vertices(X: IntervalVector, limit_dim: int = DEFAULT_VERTEX_LIMIT_DIM) -> np.ndarray:
    if X.dim > limit_dim:
        raise VertexLimitError(
            f"vertex enumeration over {X.dim} dimensions needs 2^{X.dim} points "
            f"(limit {limit_dim})"
        )
    corners = np.array(list(itertools.product((0, 1), repeat=X.dim)), dtype=float)
    return X.lower + corners * X.width


def _over_estimator(values: np.ndarray, vertices: np.ndarray, center: np.ndarray) -> np.ndarray:
    """
    Affine a·x + b ≥ values at every vertex, minimal at the box center.
    Exact for affine data; the chord in one dimension. Returns [a, b].
    """
    n = vertices.shape[1]
    cost = np.append(center, 1.0)
    A_ub = -np.hstack([vertices, np.ones((vertices.shape[0], 1))])
    b_ub = -values
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status != 0:
        # fallback: constant at the vertex maximum is always valid
        return np.append(np.zeros(n), values.max())
    return res.x


def _over(part: SymbolicDynamics, vertices: np.ndarray, X: IntervalVector, u) -> AffineBound:
    values = part.evaluate_batch(vertices, u)
    slope = np.zeros((part.n_outputs, X.dim))
    intercept = np.zeros(part.n_outputs)
    for i in range(part.n_outputs):
        v = values[:, i]
        if np.all(v == 0.0):
            continue
        sol = _over_estimator(v + _MARGIN * (1.0 + np.abs(v)), vertices, X.center)
        slope[i], intercept[i] = sol[:-1], sol[-1]
    return AffineBound(slope, intercept)


def dc_bounds(
    split: DCSplit,
    X: IntervalVector,
    tangent_points: Optional[Sequence] = None,
    u=None,
    vertex_limit_dim: int = DEFAULT_VERTEX_LIMIT_DIM,
) -> DCBounds:
    """
    Affine lower/upper bounds of f = g - h on X. tangent_points holds one
    point (shared) or one point per component; default is the box center.
    """
    if not split.domain.contains(X, tol=1e-12):
        raise InvalidSplitError(
            f"box {X.lower.tolist()} .. {X.upper.tolist()} leaves the split domain"
        )
    vertices = box_vertices(X, vertex_limit_dim)
    n_out = split.g.n_outputs

    points = [X.center] * n_out if not tangent_points else list(tangent_points)
    if len(points) == 1:
        points = points * n_out
    points = [np.asarray(p, dtype=float).reshape(-1) for p in points]
    for p in points:
        if not X.contains(IntervalVector.point(p), tol=1e-12):
            raise InvalidSplitError("tangent point outside the box")

    g_over, h_over = _over(split.g, vertices, X, u), _over(split.h, vertices, X, u)
    lo_slope, lo_icpt = np.zeros((n_out, X.dim)), np.zeros(n_out)
    up_slope, up_icpt = np.zeros((n_out, X.dim)), np.zeros(n_out)
    tangents = {}
    for i, p in enumerate(points):
        key = p.tobytes()
        if key not in tangents:
            tangents[key] = (_tangent(split.g, p, u), _tangent(split.h, p, u))
        g_tan, h_tan = tangents[key]
        lo_slope[i] = g_tan.slope[i] - h_over.slope[i]
        lo_icpt[i] = g_tan.intercept[i] - h_over.intercept[i]
        up_slope[i] = g_over.slope[i] - h_tan.slope[i]
        up_icpt[i] = g_over.intercept[i] - h_tan.intercept[i]
    return DCBounds(AffineBound(lo_slope, lo_icpt), AffineBound(up_slope, up_icpt))


def dc_enclosure(
    split: DCSplit,
    X,
    u=None,
    tangent_points: Optional[Sequence] = None,
    vertex_limit_dim: int = DEFAULT_VERTEX_LIMIT_DIM,
) -> SetValue:
    """
    f(X) ⊆ S·X + s ⊕ box(e) with S, s the mean of the affine bounds and
    e_i the largest half gap between them over X (support of X).
    """
    hull = interval_hull(X)
    bounds = dc_bounds(split, hull, tangent_points, u, vertex_limit_dim)
    slope = 0.5 * (bounds.lower.slope + bounds.upper.slope)
    intercept = 0.5 * (bounds.lower.intercept + bounds.upper.intercept)
    gap_slope = 0.5 * (bounds.upper.slope - bounds.lower.slope)
    gap_icpt = 0.5 * (bounds.upper.intercept - bounds.lower.intercept)
    half_gap = np.array([
        max(0.0, support(X, gap_slope[i]) + gap_icpt[i]) if np.any(gap_slope[i])
        else max(0.0, gap_icpt[i])
        for i in range(slope.shape[0])
    ])
    log.debug(f"dc enclosure half gaps {np.round(half_gap, 6).tolist()}")
    image = translate(linear_map(slope, X), intercept)
    if not np.any(half_gap):
        return image
    return minkowski_sum(image, IntervalVector.from_center_radius(np.zeros(slope.shape[0]), half_gap))
