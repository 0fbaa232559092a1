"""
Linear programs over constrained generator domains
====================================================
Every LP used by the set algebra has the same structure: the variables are
generator coefficients ξ ∈ [-1,1]^r subject to Aξ = b. Solved with the
HiGHS backend of scipy.optimize.linprog; no external solver processes.
"""

from typing import Optional

import numpy as np
from scipy.optimize import linprog

from src.config import LP_TOL
from src.errors import SetError

_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": max(LP_TOL, 1e-10),
    "dual_feasibility_tolerance": max(LP_TOL, 1e-10),
}

# linprog status codes
_INFEASIBLE = 2


def _linprog(c, **kwargs):
    res = linprog(c, method="highs", options=_HIGHS_OPTIONS, **kwargs)
    if res.status not in (0, _INFEASIBLE):
        raise SetError(f"LP solver failed: {res.message}")
    return res


def _equalities_hold(A: np.ndarray, b: np.ndarray) -> bool:
    """Feasibility of Aξ = b when r = 0."""
    return bool(np.all(np.abs(b) <= LP_TOL))


def domain_support(G: np.ndarray, A: np.ndarray, b: np.ndarray, d: np.ndarray) -> Optional[float]:
    """max dᵀGξ over {ξ ∈ [-1,1]^r : Aξ = b}; None when the domain is empty."""
    r = G.shape[1]
    w = G.T @ d
    if r == 0:
        return 0.0 if _equalities_hold(A, b) else None
    if A.shape[0] == 0:
        return float(np.abs(w).sum())
    res = _linprog(-w, A_eq=A, b_eq=b, bounds=[(-1.0, 1.0)] * r)
    if res.status == _INFEASIBLE:
        return None
    return float(-res.fun)


def domain_feasible(A: np.ndarray, b: np.ndarray, r: int) -> bool:
    """Is {ξ ∈ [-1,1]^r : Aξ = b} nonempty?"""
    if A.shape[0] == 0:
        return True
    if r == 0:
        return _equalities_hold(A, b)
    res = _linprog(np.zeros(r), A_eq=A, b_eq=b, bounds=[(-1.0, 1.0)] * r)
    return res.status != _INFEASIBLE


def min_scaling(G: np.ndarray, A: np.ndarray, b: np.ndarray, target: np.ndarray) -> Optional[float]:
    """
    Smallest t with Gξ = target, Aξ = b, |ξ|∞ ≤ t.
    A point x lies in the (constrained) zonotope iff t(x - c) ≤ 1.
    Returns None when the equalities cannot be met at all.
    """
    n, r = G.shape
    if r == 0:
        ok = np.all(np.abs(target) <= LP_TOL) and _equalities_hold(A, b)
        return 0.0 if ok else None
    # variables [ξ (r), t]
    cost = np.zeros(r + 1)
    cost[-1] = 1.0
    eye = np.eye(r)
    ones = np.ones((r, 1))
    A_ub = np.vstack([np.hstack([eye, -ones]), np.hstack([-eye, -ones])])
    b_ub = np.zeros(2 * r)
    A_eq = np.hstack([G, np.zeros((n, 1))])
    b_eq = np.asarray(target, dtype=float)
    if A.shape[0]:
        A_eq = np.vstack([A_eq, np.hstack([A, np.zeros((A.shape[0], 1))])])
        b_eq = np.concatenate([b_eq, b])
    bounds = [(None, None)] * r + [(0.0, None)]
    res = _linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
    if res.status == _INFEASIBLE:
        return None
    return float(res.x[-1])
