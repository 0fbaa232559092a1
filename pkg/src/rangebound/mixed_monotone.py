"""
Mixed-Monotone Decomposition
=============================
d(x, x̂) increasing in x, decreasing in x̂, with d(x, x) = f(x); then
[d(lo, hi), d(hi, lo)] encloses f over [lo, hi].

Built from interval Jacobian bounds [a, b] over the box (Jacobian-sign
remainder form). For every entry (i, j) the cheaper of two options is used:

    z_j = x_j   correction c_ij = max(0, -a_ij)
    z_j = x̂_j   correction c_ij = max(0,  b_ij)

    d_i(x, x̂) = f_i(zⁱ) + Σ_j c_ij (x_j - x̂_j)

Entries whose interval contains 0 pay the smaller of both corrections.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.rangebound.enclosures import jacobian_interval
from src.rangebound.expressions import SymbolicDynamics
from src.rangebound.interval_eval import IntervalMatrix
from src.sets.representations import IntervalVector


@dataclass(frozen=True, eq=False)
class DecompositionFunction:
    """f_d(x, x̂) valid for arguments in domain."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: IntervalVector

    def __call__(self, x, x_hat) -> np.ndarray:
        return self.fn(np.asarray(x, dtype=float), np.asarray(x_hat, dtype=float))


def _sign_choice(J: IntervalMatrix):
    c_x = np.maximum(0.0, -J.lower)
    c_hat = np.maximum(0.0, J.upper)
    use_x = c_x <= c_hat
    return use_x, np.where(use_x, c_x, c_hat)


def _decomposition(
    point_map: Callable[[np.ndarray], np.ndarray],
    J: IntervalMatrix,
    domain: IntervalVector,
) -> DecompositionFunction:
    """point_map evaluates the map at a batch of argument rows."""
    use_x, corr = _sign_choice(J)

    def fn(x: np.ndarray, x_hat: np.ndarray) -> np.ndarray:
        Z = np.where(use_x, x[None, :], x_hat[None, :])
        values = np.diagonal(point_map(Z)).copy()
        return values + corr @ (x - x_hat)

    return DecompositionFunction(fn, domain)


def jacobian_sign_decomposition(f: SymbolicDynamics, box: IntervalVector, u=None) -> DecompositionFunction:
    """Decomposition function of f valid on box."""
    J = jacobian_interval(f, box, u)
    return _decomposition(lambda Z: f.evaluate_batch(Z, u), J, box)


def lifted_decomposition(
    f: SymbolicDynamics,
    center: np.ndarray,
    generators: np.ndarray,
    u=None,
    linear_part: Optional[np.ndarray] = None,
) -> DecompositionFunction:
    """
    Decomposition of f̃(ξ) = f(c + Gξ) - H(c + Gξ) on ξ ∈ [-1, 1]^r,
    H = linear_part (zero when omitted). The Jacobian (J_f - H)·G is
    bounded over the box c ± |G|·1.
    """
    center = np.asarray(center, dtype=float)
    G = np.asarray(generators, dtype=float)
    radius = np.abs(G).sum(axis=1)
    hull = IntervalVector.from_center_radius(center, radius)
    J = jacobian_interval(f, hull, u)
    H = np.zeros((f.n_outputs, f.n_states)) if linear_part is None else np.asarray(linear_part)
    J_lifted = IntervalMatrix(J.lower - H, J.upper - H).matmul(G)

    def point_map(Xi: np.ndarray) -> np.ndarray:
        X = center[None, :] + Xi @ G.T
        return f.evaluate_batch(X, u) - X @ H.T

    return _decomposition(point_map, J_lifted, IntervalVector.unit(G.shape[1]))


def mixed_monotone_bounds(d: DecompositionFunction, box: IntervalVector) -> IntervalVector:
    """[d(lo, hi), d(hi, lo)] componentwise."""
    low = d(box.lower, box.upper)
    high = d(box.upper, box.lower)
    return IntervalVector(np.minimum(low, high), np.maximum(low, high))
