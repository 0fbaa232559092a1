"""
Guaranteed Enclosures of f over a Set
======================================
    interval_eval               natural inclusion function F(X, U)
    jacobian_interval           ∂f/∂x over a box (symbolic, then F)
    hessian_interval            ∂²f_i/∂x² over a box
    mean_value_extension        f(m) ⊕ ∇f(hull X)·(X - m)
    conservative_linearization  f(x) ∈ f(m) + A(x - m) ⊕ R,
                                R from the interval Hessian

Gradient and Hessian enclosures are taken over the interval hull of X.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import RangeBoundError
from src.rangebound.expressions import SymbolicDynamics
from src.rangebound.interval_eval import IntervalMatrix
from src.sets.operations import interval_hull, linear_map, minkowski_sum, to_zonotope, translate
from src.sets.representations import ConstrainedZonotope, IntervalVector, SetValue, Zonotope

_HULL_TOL = 1e-9


def interval_eval(f: SymbolicDynamics, X: IntervalVector, U=None) -> IntervalVector:
    """Natural inclusion: result ⊇ {f(x, u) : x ∈ X, u ∈ U}."""
    lo, hi = f.interval_value(X, U)
    return IntervalVector(lo, hi)


def jacobian_interval(f: SymbolicDynamics, X: IntervalVector, U=None) -> IntervalMatrix:
    lo, hi = f.interval_jacobian(X, U)
    return IntervalMatrix(lo, hi)


def hessian_interval(f: SymbolicDynamics, i: int, X: IntervalVector, U=None) -> IntervalMatrix:
    lo, hi = f.interval_hessian(i, X, U)
    return IntervalMatrix(lo, hi)


def _as_operand(X) -> SetValue:
    if isinstance(X, IntervalVector):
        return to_zonotope(X)
    if isinstance(X, (Zonotope, ConstrainedZonotope)):
        return X
    raise RangeBoundError(f"enclosures over {type(X).__name__} are not supported")


def _expansion_point(hull: IntervalVector, c) -> np.ndarray:
    if c is None:
        return hull.center
    c = np.asarray(c, dtype=float).reshape(-1)
    if not hull.contains(IntervalVector.point(c), tol=_HULL_TOL):
        raise RangeBoundError("expansion point lies outside the interval hull of X")
    return c


def mean_value_extension(f: SymbolicDynamics, X, c=None, u=None) -> SetValue:
    """
    Mean-value enclosure of f(X). The interval gradient [J] = M ± Δ is split
    so that [J](X - c) ⊆ M(X - c) ⊕ box(Δ·|hull(X) - c|).
    Zonotopes stay zonotopes, constrained zonotopes stay constrained.
    c defaults to the hull midpoint.
    """
    X = _as_operand(X)
    hull = interval_hull(X)
    c = _expansion_point(hull, c)
    J = jacobian_interval(f, hull, u)
    deviation = np.maximum(np.abs(hull.lower - c), np.abs(hull.upper - c))
    image = translate(linear_map(J.center, translate(X, -c)), f.evaluate(c, u))
    slack = J.radius @ deviation
    if not np.any(slack):
        return image
    return minkowski_sum(image, IntervalVector.from_center_radius(np.zeros(f.n_outputs), slack))


@dataclass(frozen=True, eq=False)
class LinearizationResult:
    """f(x) ∈ A·x + offset ⊕ remainder for every x in the linearized set."""

    A: np.ndarray
    offset: np.ndarray
    remainder: IntervalVector
    point: np.ndarray


def _square(lo: np.ndarray, hi: np.ndarray):
    a, b = lo ** 2, hi ** 2
    sq_hi = np.maximum(a, b)
    sq_lo = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(a, b))
    return sq_lo, sq_hi


def _interval_mul(a_lo, a_hi, b_lo, b_hi):
    p = np.stack([a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi])
    return p.min(axis=0), p.max(axis=0)


def second_order_remainder(f: SymbolicDynamics, hull: IntervalVector, c: np.ndarray, u=None) -> IntervalVector:
    """R_i = ½ δᵀ H_i(hull) δ with δ ∈ hull - c, in interval arithmetic."""
    d_lo, d_hi = hull.lower - c, hull.upper - c
    sq_lo, sq_hi = _square(d_lo, d_hi)
    cross_lo, cross_hi = _interval_mul(d_lo[:, None], d_hi[:, None], d_lo[None, :], d_hi[None, :])
    n = f.n_states
    diag = np.eye(n, dtype=bool)
    upper_tri = np.triu(np.ones((n, n), dtype=bool), k=1)
    r_lo = np.zeros(f.n_outputs)
    r_hi = np.zeros(f.n_outputs)
    for i in range(f.n_outputs):
        H_lo, H_hi = f.interval_hessian(i, hull, u)
        if not (np.any(H_lo) or np.any(H_hi)):
            continue
        t_lo, t_hi = _interval_mul(H_lo, H_hi, sq_lo[None, :] * diag, sq_hi[None, :] * diag)
        terms_lo = np.where(diag, t_lo, 0.0)
        terms_hi = np.where(diag, t_hi, 0.0)
        o_lo, o_hi = _interval_mul(2.0 * H_lo, 2.0 * H_hi, cross_lo, cross_hi)
        terms_lo = terms_lo + np.where(upper_tri, o_lo, 0.0)
        terms_hi = terms_hi + np.where(upper_tri, o_hi, 0.0)
        r_lo[i], r_hi[i] = 0.5 * terms_lo.sum(), 0.5 * terms_hi.sum()
    return IntervalVector(r_lo, r_hi)


def conservative_linearization(f: SymbolicDynamics, X, c=None, u=None) -> LinearizationResult:
    """
    First-order Taylor expansion at c (default: hull midpoint) with a
    Lagrange remainder bounded by the interval Hessian over hull(X).
    """
    hull = interval_hull(X)
    c = _expansion_point(hull, c)
    A = f.jacobian(c, u)
    offset = f.evaluate(c, u) - A @ c
    remainder = second_order_remainder(f, hull, c, u)
    return LinearizationResult(A=A, offset=offset, remainder=remainder, point=c)


def apply_linearization(lin: LinearizationResult, X) -> SetValue:
    """A·X + offset ⊕ remainder, in X's representation."""
    image = translate(linear_map(lin.A, X), lin.offset)
    if not np.any(lin.remainder.width) and not np.any(lin.remainder.center):
        return image
    return minkowski_sum(image, lin.remainder)
