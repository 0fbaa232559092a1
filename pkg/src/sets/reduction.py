"""
Order and Constraint Reduction
===============================
    reduce_zonotope       PCA (default) or Girard boxing of the smallest
                          generators down to a target order
    reduce_constraints    exact removal of dependent rows, then
                          generator/constraint pair elimination ranked by
                          how far each row forces its coefficient past the
                          unit bound (interval-propagated coefficient
                          ranges, weighted by the generator norm), then
                          lifted order reduction
    reduce_bundle         member-wise order reduction plus member cap

All reductions are outer approximations: the result contains the input.
"""

from typing import Tuple

import numpy as np
from scipy.linalg import qr

from src.errors import SetError
from src.log import get_logger
from src.sets.operations import implied_ranges, interval_hull
from src.sets.representations import ConstrainedZonotope, IntervalVector, Zonotope, ZonotopeBundle

log = get_logger("REDUCE")

REDUCTION_METHODS = ("pca", "girard")
_RANK_TOL = 1e-10


def _generator_budget(max_order: float, n: int) -> int:
    if max_order < 1:
        raise SetError(f"maxOrder must be >= 1, got {max_order}")
    return int(np.floor(max_order * n + 1e-9))


def _box_generators(G: np.ndarray, method: str) -> np.ndarray:
    """Generators of a parallelotope enclosing the zonotope spanned by G."""
    n = G.shape[0]
    if G.shape[1] == 0:
        return np.zeros((n, 0))
    if method == "girard":
        box = np.diag(np.abs(G).sum(axis=1))
    elif method == "pca":
        # principal axes of the mirrored generator cloud [G, -G]
        U, _, _ = np.linalg.svd(np.hstack([G, -G]), full_matrices=True)
        box = U @ np.diag(np.abs(U.T @ G).sum(axis=1))
    else:
        raise SetError(f"unknown reduction method {method!r}; choose from {REDUCTION_METHODS}")
    keep = np.abs(box).sum(axis=0) > 0
    return box[:, keep]


def _reduce_to_count(Z: Zonotope, max_generators: int, method: str) -> Zonotope:
    Z = Z.drop_zero_generators()
    n, r = Z.dim, Z.n_generators
    if r <= max_generators:
        return Z
    n_keep = max(max_generators - n, 0)
    G = Z.generators
    metric = np.abs(G).sum(axis=0) - np.abs(G).max(axis=0)
    order = np.argsort(-metric, kind="stable")
    kept = G[:, np.sort(order[:n_keep])]
    boxed = _box_generators(G[:, order[n_keep:]], method)
    return Zonotope(Z.center, np.hstack([kept, boxed]))


def reduce_zonotope(Z: Zonotope, max_order: float, method: str = "pca") -> Zonotope:
    """Order reduction; a no-op when order(Z) ≤ max_order."""
    return _reduce_to_count(Z, _generator_budget(max_order, Z.dim), method)


# ------------------------------------------------------------------ #
# CONSTRAINED ZONOTOPES                                                #
# ------------------------------------------------------------------ #

def drop_dependent_constraints(cz: ConstrainedZonotope) -> ConstrainedZonotope:
    """Remove rows of [A | b] that are linear combinations of the others (exact)."""
    q = cz.n_constraints
    if q == 0:
        return cz
    Ab = np.hstack([cz.constraint_matrix, cz.constraint_offset.reshape(-1, 1)])
    _, R, piv = qr(Ab.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(diag > _RANK_TOL * max(1.0, diag[0])))
    if rank == q:
        return cz
    keep = np.sort(piv[:rank])
    return ConstrainedZonotope(
        cz.center, cz.generators, cz.constraint_matrix[keep], cz.constraint_offset[keep]
    )


def _implied_ranges(row: np.ndarray, rhs: float, lo: np.ndarray, hi: np.ndarray):
    return implied_ranges(row, rhs, rhs, lo, hi)


def _propagate_domain(A: np.ndarray, b: np.ndarray, sweeps: int = 2) -> IntervalVector:
    """Box enclosing {ξ ∈ [-1,1]^r : Aξ = b} by interval constraint propagation."""
    r = A.shape[1]
    lo, hi = -np.ones(r), np.ones(r)
    for _ in range(sweeps):
        for i in range(A.shape[0]):
            idx, r_lo, r_hi = _implied_ranges(A[i], b[i], lo, hi)
            lo[idx] = np.maximum(lo[idx], r_lo)
            hi[idx] = np.minimum(hi[idx], r_hi)
    # an empty domain is reported by the LPs, not here
    return IntervalVector(np.minimum(lo, hi), np.maximum(lo, hi))


def _elimination_choice(cz: ConstrainedZonotope) -> Tuple[int, int]:
    """
    Pick the (constraint i, generator j) pair whose elimination loosens the
    set least. Row i solved for ξ_j gives an implied range R_ij for ξ_j from
    the propagated ranges of the other coefficients; the score is
    ‖g_j‖ · max(0, |R_ij|∞ - 1), zero when the unit bound on ξ_j is implied.
    Ties resolve to the lowest constraint index, then the lowest generator.
    """
    A, b, G = cz.constraint_matrix, cz.constraint_offset, cz.generators
    E = _propagate_domain(A, b)
    gnorm = np.linalg.norm(G, axis=0)
    lo, hi = E.lower.copy(), E.upper.copy()
    best, best_score = None, np.inf
    for i in range(A.shape[0]):
        idx, r_lo, r_hi = _implied_ranges(A[i], b[i], lo, hi)
        if idx.size == 0:
            continue
        reach = np.maximum(np.abs(r_lo), np.abs(r_hi))
        scores = gnorm[idx] * np.maximum(0.0, reach - 1.0)
        k = int(np.argmin(scores))
        if scores[k] < best_score:
            best, best_score = (i, int(idx[k])), float(scores[k])
    if best is None:
        raise SetError("no constraint with a nonzero coefficient to eliminate")
    return best


def eliminate_constraint(cz: ConstrainedZonotope, i: int, j: int) -> ConstrainedZonotope:
    """Solve constraint i for ξ_j and substitute; drops row i and column j."""
    A, b, G, c = cz.constraint_matrix, cz.constraint_offset, cz.generators, cz.center
    a = A[i, j]
    lam_G = G[:, j] / a
    lam_A = A[:, j] / a
    c_new = c + lam_G * b[i]
    G_new = G - np.outer(lam_G, A[i])
    A_new = A - np.outer(lam_A, A[i])
    b_new = b - lam_A * b[i]
    rows = np.arange(A.shape[0]) != i
    cols = np.arange(A.shape[1]) != j
    return ConstrainedZonotope(c_new, G_new[:, cols], A_new[np.ix_(rows, cols)], b_new[rows])


def reduce_cz_order(cz: ConstrainedZonotope, max_order: float, method: str = "pca") -> ConstrainedZonotope:
    """Order reduction of the lifted zonotope ([c; -b], [G; A]), split back afterwards."""
    n, q = cz.dim, cz.n_constraints
    budget = _generator_budget(max_order, n)
    if cz.n_generators <= budget:
        return cz
    lifted = Zonotope(
        np.concatenate([cz.center, -cz.constraint_offset]),
        np.vstack([cz.generators, cz.constraint_matrix]),
    )
    reduced = _reduce_to_count(lifted, max(budget, n + q), method)
    return ConstrainedZonotope(
        reduced.center[:n],
        reduced.generators[:n],
        reduced.generators[n:],
        -reduced.center[n:],
    )


def reduce_constraints(
    cz: ConstrainedZonotope,
    max_constraints: int,
    max_order: float,
    method: str = "pca",
) -> ConstrainedZonotope:
    """Constraint budget first, then order budget."""
    if max_constraints < 0:
        raise SetError(f"maxConstraints must be >= 0, got {max_constraints}")
    if cz.n_constraints > max_constraints:
        cz = drop_dependent_constraints(cz)
    eliminated = 0
    while cz.n_constraints > max_constraints:
        i, j = _elimination_choice(cz)
        cz = eliminate_constraint(cz, i, j)
        eliminated += 1
    if eliminated:
        log.debug(f"eliminated {eliminated} constraint(s), q={cz.n_constraints}")
    return reduce_cz_order(cz, max_order, method)


def reduce_bundle(
    bundle: ZonotopeBundle,
    max_order: float,
    max_members: int,
    method: str = "pca",
) -> ZonotopeBundle:
    """
    Member-wise order reduction. Above the member cap the oldest members are
    dropped and the interval hull of the full bundle joins as the newest one.
    """
    members = [reduce_zonotope(m, max_order, method) for m in bundle.members]
    if len(members) > max_members:
        hull = interval_hull(bundle)
        members = members[len(members) - max_members + 1:] + [Zonotope.from_interval(hull)]
    return ZonotopeBundle(tuple(members))
