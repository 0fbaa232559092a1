"""
Consistent-Set Oracle (n ≤ 2)
==============================
Brute-force point cloud of

    S_k = { f(x⁻, u) + w : x⁻ ∈ S_{k-1}, w ∈ W } ∩ { x : y - Cx ∈ V }

on a grid. Every returned point is a genuinely consistent state, so any
sound estimator must contain the whole cloud.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.errors import OracleError
from src.sets.operations import contains_point, interval_hull
from src.sets.representations import IntervalVector, SetValue
from src.system.model import NonlinearDiscreteSystem

MAX_DIM = 2
_MAX_AXIS_POINTS = 2001
_W_AXIS_POINTS = 3


@dataclass(frozen=True, eq=False)
class OracleCloud:
    points: np.ndarray
    empty: bool

    def thin(self, max_points: int, seed: int = 0) -> "OracleCloud":
        """Deterministic random subset of at most max_points rows."""
        if self.points.shape[0] <= max_points:
            return self
        idx = np.sort(np.random.default_rng(seed).choice(self.points.shape[0], max_points, replace=False))
        return OracleCloud(self.points[idx], self.empty)


def _axis(lo: float, hi: float, res: float, cap: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    count = min(cap, int(np.ceil((hi - lo) / res)) + 1)
    return np.linspace(lo, hi, max(count, 2))


def grid_points(box: IntervalVector, res: float, cap: int = _MAX_AXIS_POINTS) -> np.ndarray:
    axes = [_axis(lo, hi, res, cap) for lo, hi in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.reshape(-1) for m in mesh])


def _prior_points(S_prev, grid_res: float) -> np.ndarray:
    if isinstance(S_prev, np.ndarray):
        return np.atleast_2d(S_prev)
    pts = grid_points(interval_hull(S_prev), grid_res)
    if isinstance(S_prev, IntervalVector):
        return pts
    keep = np.array([contains_point(S_prev, p) for p in pts], dtype=bool)
    return pts[keep]


def consistent_set_oracle(
    sys: NonlinearDiscreteSystem,
    S_prev: Union[SetValue, np.ndarray],
    u,
    y,
    grid_res: float = 1e-2,
    w_points: int = _W_AXIS_POINTS,
) -> OracleCloud:
    """
    S_prev is a set (gridded at grid_res) or a previous cloud (rows are
    points). W is sampled on a small grid including its corners and center.
    """
    if sys.n > MAX_DIM:
        raise OracleError(f"consistent-set oracle supports n ≤ {MAX_DIM}, got n = {sys.n}")
    prior = _prior_points(S_prev, grid_res)
    if prior.shape[0] == 0:
        return OracleCloud(np.zeros((0, sys.n)), True)

    images = sys.f.evaluate_batch(prior, u)
    w_grid = _w_samples(sys.W, w_points)
    points = (images[:, None, :] + w_grid[None, :, :]).reshape(-1, sys.n)

    if sys.r:
        residual = np.asarray(y, dtype=float)[None, :] - points @ sys.C.T
        ok = np.all((residual >= sys.V.lower) & (residual <= sys.V.upper), axis=1)
        points = points[ok]
    return OracleCloud(points, points.shape[0] == 0)


def _w_samples(W: IntervalVector, per_axis: int) -> np.ndarray:
    """Grid over W with per_axis points per axis (corners and center for 3)."""
    axes = [np.linspace(lo, hi, per_axis) if hi > lo else np.array([lo]) for lo, hi in zip(W.lower, W.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.reshape(-1) for m in mesh])


def propagate_cloud(
    sys: NonlinearDiscreteSystem,
    S0: SetValue,
    inputs: np.ndarray,
    measurements: np.ndarray,
    steps: int,
    grid_res: float = 1e-2,
    max_points: Optional[int] = 20000,
    seed: int = 0,
) -> OracleCloud:
    """Chain the oracle for k steps starting with the step-0 correction."""
    if sys.n > MAX_DIM:
        raise OracleError(f"consistent-set oracle supports n ≤ {MAX_DIM}, got n = {sys.n}")
    pts = _prior_points(S0, grid_res)
    if sys.r:
        residual = measurements[0][None, :] - pts @ sys.C.T
        pts = pts[np.all((residual >= sys.V.lower) & (residual <= sys.V.upper), axis=1)]
    cloud = OracleCloud(pts, pts.shape[0] == 0)
    for k in range(steps):
        if cloud.empty:
            break
        if max_points:
            cloud = cloud.thin(max_points, seed + k)
        cloud = consistent_set_oracle(sys, cloud.points, inputs[k], measurements[k + 1], grid_res)
    return cloud
