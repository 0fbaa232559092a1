"""
Set Operations
===============
Minkowski sum, linear map, generalized intersection, strip intersection,
interval hull, support function, membership and the conversions between
representations.

Exactness:
    exact        zonotope/CZ Minkowski sum and linear map, CZ intersection
    outer bound  ellipsoid sum (minimal trace), interval linear map (hull),
                 strip intersection with a gain, ellipsoid-strip fusion
"""

from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from src.config import ELLIPSOID_EPS, MEMBERSHIP_TOL
from src.errors import DimensionMismatchError, EmptySetError, SetError, UnsupportedPairingError
from src.sets.lp import domain_feasible, domain_support, min_scaling
from src.sets.representations import (
    ConstrainedZonotope,
    Ellipsoid,
    EmptySet,
    IntervalVector,
    MaybeEmpty,
    SetValue,
    Strip,
    Zonotope,
    ZonotopeBundle,
    dimension,
)


def _check_dims(a: int, b: int, what: str) -> None:
    if a != b:
        raise DimensionMismatchError(f"{what}: dimension {a} vs {b}")


def _block_diag(A1: np.ndarray, A2: np.ndarray) -> np.ndarray:
    out = np.zeros((A1.shape[0] + A2.shape[0], A1.shape[1] + A2.shape[1]))
    out[: A1.shape[0], : A1.shape[1]] = A1
    out[A1.shape[0]:, A1.shape[1]:] = A2
    return out


# ------------------------------------------------------------------ #
# CONVERSIONS                                                          #
# ------------------------------------------------------------------ #

def to_zonotope(X) -> Zonotope:
    if isinstance(X, Zonotope):
        return X
    if isinstance(X, IntervalVector):
        if not X.is_bounded():
            raise SetError("cannot convert an unbounded interval to a zonotope")
        return Zonotope.from_interval(X)
    raise UnsupportedPairingError(f"cannot convert {type(X).__name__} to a zonotope")


def to_constrained(X) -> ConstrainedZonotope:
    if isinstance(X, ConstrainedZonotope):
        return X
    if isinstance(X, ZonotopeBundle):
        return bundle_to_cz(X)
    return ConstrainedZonotope.from_zonotope(to_zonotope(X))


def _cz_intersection(X: ConstrainedZonotope, C: np.ndarray, Y: ConstrainedZonotope) -> ConstrainedZonotope:
    """{x ∈ X : Cx ∈ Y} as a constrained zonotope."""
    n, ry = X.dim, Y.n_generators
    G = np.hstack([X.generators, np.zeros((n, ry))])
    A = np.vstack([
        _block_diag(X.constraint_matrix, Y.constraint_matrix),
        np.hstack([C @ X.generators, -Y.generators]),
    ])
    b = np.concatenate([
        X.constraint_offset,
        Y.constraint_offset,
        Y.center - C @ X.center,
    ])
    return ConstrainedZonotope(X.center, G, A, b)


def bundle_to_cz(B: ZonotopeBundle) -> ConstrainedZonotope:
    """Exact constrained zonotope of the intersection of all members."""
    cz = ConstrainedZonotope.from_zonotope(B.members[0])
    eye = np.eye(B.dim)
    for member in B.members[1:]:
        cz = _cz_intersection(cz, eye, ConstrainedZonotope.from_zonotope(member))
    return cz


def is_empty(X) -> bool:
    if isinstance(X, EmptySet):
        return True
    if isinstance(X, ZonotopeBundle):
        X = bundle_to_cz(X)
    if isinstance(X, ConstrainedZonotope):
        return not domain_feasible(X.constraint_matrix, X.constraint_offset, X.n_generators)
    return False


# ------------------------------------------------------------------ #
# MINKOWSKI SUM                                                        #
# ------------------------------------------------------------------ #

def _ellipsoid_sum(E1: Ellipsoid, E2: Ellipsoid) -> Ellipsoid:
    """Minimal-trace member of the family (1 + 1/p)P1 + (1 + p)P2."""
    t1, t2 = np.trace(E1.shape), np.trace(E2.shape)
    center = E1.center + E2.center
    if t2 <= 0.0:
        return Ellipsoid(center, E1.shape)
    if t1 <= 0.0:
        return Ellipsoid(center, E2.shape)
    p = np.sqrt(t1 / t2)
    return Ellipsoid(center, (1.0 + 1.0 / p) * E1.shape + (1.0 + p) * E2.shape)


def _cz_sum(X: ConstrainedZonotope, W: ConstrainedZonotope) -> ConstrainedZonotope:
    return ConstrainedZonotope(
        X.center + W.center,
        np.hstack([X.generators, W.generators]),
        _block_diag(X.constraint_matrix, W.constraint_matrix),
        np.concatenate([X.constraint_offset, W.constraint_offset]),
    )


def minkowski_sum(X, W) -> MaybeEmpty:
    """X ⊕ W. Exact except for ellipsoids (documented outer bound)."""
    _check_dims(dimension(X), dimension(W), "minkowski_sum")
    if isinstance(X, EmptySet) or isinstance(W, EmptySet):
        return EmptySet(dimension(X))

    if isinstance(X, IntervalVector) and isinstance(W, IntervalVector):
        return IntervalVector(X.lower + W.lower, X.upper + W.upper)

    if isinstance(X, Ellipsoid) and isinstance(W, Ellipsoid):
        return _ellipsoid_sum(X, W)

    if isinstance(X, ZonotopeBundle) and isinstance(W, (Zonotope, IntervalVector)):
        W = to_zonotope(W)
        return ZonotopeBundle(tuple(minkowski_sum(m, W) for m in X.members))

    zonotopic = (Zonotope, IntervalVector)
    if isinstance(X, zonotopic) and isinstance(W, zonotopic):
        X, W = to_zonotope(X), to_zonotope(W)
        return Zonotope(X.center + W.center, np.hstack([X.generators, W.generators]))

    constrained = (ConstrainedZonotope, Zonotope, IntervalVector)
    if isinstance(X, constrained) and isinstance(W, constrained):
        return _cz_sum(to_constrained(X), to_constrained(W))

    raise UnsupportedPairingError(
        f"minkowski_sum of {type(X).__name__} and {type(W).__name__} is not supported"
    )


# ------------------------------------------------------------------ #
# LINEAR MAP                                                           #
# ------------------------------------------------------------------ #

def _regularized(P: np.ndarray) -> np.ndarray:
    P = 0.5 * (P + P.T)
    if P.size == 0:
        return P
    scale = max(1.0, float(np.max(np.abs(np.diag(P)))))
    if np.linalg.eigvalsh(P).min() <= ELLIPSOID_EPS * scale:
        P = P + ELLIPSOID_EPS * scale * np.eye(P.shape[0])
    return P


def linear_map(M, X) -> MaybeEmpty:
    """M·X. Interval images are boxed; singular ellipsoid images are inflated by ε."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    _check_dims(M.shape[1], dimension(X), "linear_map")
    p = M.shape[0]

    if isinstance(X, EmptySet):
        return EmptySet(p)
    if isinstance(X, IntervalVector):
        return IntervalVector.from_center_radius(M @ X.center, np.abs(M) @ X.radius)
    if isinstance(X, Ellipsoid):
        return Ellipsoid(M @ X.center, _regularized(M @ X.shape @ M.T))
    if isinstance(X, Zonotope):
        return Zonotope(M @ X.center, M @ X.generators).drop_zero_generators()
    if isinstance(X, ConstrainedZonotope):
        G = M @ X.generators
        keep = (np.abs(G).sum(axis=0) > 0) | (np.abs(X.constraint_matrix).sum(axis=0) > 0)
        return ConstrainedZonotope(
            M @ X.center, G[:, keep], X.constraint_matrix[:, keep], X.constraint_offset
        )
    if isinstance(X, ZonotopeBundle):
        return ZonotopeBundle(tuple(linear_map(M, m) for m in X.members))
    raise UnsupportedPairingError(f"linear_map of {type(X).__name__} is not supported")


def translate(X, v) -> MaybeEmpty:
    """X + v for a point v."""
    v = np.asarray(v, dtype=float).reshape(-1)
    _check_dims(v.size, dimension(X), "translate")
    if isinstance(X, EmptySet):
        return X
    if isinstance(X, IntervalVector):
        return IntervalVector(X.lower + v, X.upper + v)
    if isinstance(X, Ellipsoid):
        return Ellipsoid(X.center + v, X.shape)
    if isinstance(X, Zonotope):
        return Zonotope(X.center + v, X.generators)
    if isinstance(X, ConstrainedZonotope):
        return ConstrainedZonotope(
            X.center + v, X.generators, X.constraint_matrix, X.constraint_offset
        )
    if isinstance(X, ZonotopeBundle):
        return ZonotopeBundle(tuple(translate(m, v) for m in X.members))
    raise UnsupportedPairingError(f"translate of {type(X).__name__} is not supported")


# ------------------------------------------------------------------ #
# INTERSECTIONS                                                        #
# ------------------------------------------------------------------ #

def _bounded_rows(C: np.ndarray, Y: IntervalVector):
    """Rows of an interval constraint that carry information."""
    keep = np.isfinite(Y.lower) & np.isfinite(Y.upper)
    return C[keep], IntervalVector(Y.lower[keep], Y.upper[keep])


def generalized_intersection(X, C, Y) -> MaybeEmpty:
    """
    {x ∈ X : Cx ∈ Y}. Exact constrained zonotope for interval/zonotope/CZ
    operands; a bundle intersected with a zonotope under C = I gains a member.
    Infeasible results come back as EmptySet.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    _check_dims(C.shape[1], dimension(X), "generalized_intersection (columns of C)")
    _check_dims(C.shape[0], dimension(Y), "generalized_intersection (rows of C)")
    if isinstance(X, EmptySet) or isinstance(Y, EmptySet):
        return EmptySet(dimension(X))
    if isinstance(X, Ellipsoid) or isinstance(Y, (Ellipsoid, ZonotopeBundle)):
        raise UnsupportedPairingError(
            f"generalized_intersection of {type(X).__name__} with {type(Y).__name__}"
        )

    if isinstance(Y, IntervalVector):
        C, Y = _bounded_rows(C, Y)
        if Y.dim == 0:
            return X

    if isinstance(X, ZonotopeBundle) and isinstance(Y, (Zonotope, IntervalVector)):
        if C.shape == (X.dim, X.dim) and np.array_equal(C, np.eye(X.dim)):
            result = ZonotopeBundle(X.members + (to_zonotope(Y),))
            return EmptySet(X.dim) if is_empty(result) else result

    result = _cz_intersection(to_constrained(X), C, to_constrained(Y))
    if is_empty(result):
        return EmptySet(X.dim)
    return result


def strip_intersection_gain(Z, strip: Strip, gain) -> SetValue:
    """
    Outer bound of Z ∩ strip for an arbitrary gain λ:
        c' = c + λ(ρ - nᵀc),  G' = [(I - λnᵀ)G, σλ]
    with ρ the strip midpoint and σ its half width. Valid for every λ;
    constrained zonotopes keep their constraints.
    """
    if not isinstance(Z, (Zonotope, ConstrainedZonotope)):
        raise UnsupportedPairingError(f"strip intersection of {type(Z).__name__}")
    lam = np.asarray(gain, dtype=float).reshape(-1)
    _check_dims(lam.size, Z.dim, "strip_intersection_gain (gain)")
    _check_dims(strip.dim, Z.dim, "strip_intersection_gain (strip)")
    if not np.any(lam):
        return Z

    nvec, sigma = strip.normal, strip.half_width
    center = Z.center + lam * (strip.midpoint - nvec @ Z.center)
    G = Z.generators - np.outer(lam, nvec @ Z.generators)
    extra = (sigma * lam).reshape(-1, 1) if sigma > 0 else np.zeros((Z.dim, 0))
    G = np.hstack([G, extra])
    if isinstance(Z, Zonotope):
        return Zonotope(center, G)
    A = np.hstack([Z.constraint_matrix, np.zeros((Z.n_constraints, extra.shape[1]))])
    return ConstrainedZonotope(center, G, A, Z.constraint_offset)


def implied_ranges(row: np.ndarray, rhs_lo: float, rhs_hi: float, lo: np.ndarray, hi: np.ndarray):
    """
    For every j with row[j] ≠ 0, the range of x_j allowed by
    rhs_lo ≤ row·x ≤ rhs_hi when the other x_k range over [lo_k, hi_k].
    Returns (indices, lower, upper).
    """
    idx = np.flatnonzero(np.abs(row) > 1e-12)
    t_lo = np.minimum(row * lo, row * hi)
    t_hi = np.maximum(row * lo, row * hi)
    s_lo = t_lo.sum() - t_lo[idx]
    s_hi = t_hi.sum() - t_hi[idx]
    a = row[idx]
    e1, e2 = (rhs_lo - s_hi) / a, (rhs_hi - s_lo) / a
    return idx, np.minimum(e1, e2), np.maximum(e1, e2)


def contract_box(X: IntervalVector, rows, rhs_lo, rhs_hi, passes: int = 1) -> MaybeEmpty:
    """
    Forward-backward interval constraint propagation of
    rhs_lo ≤ rows·x ≤ rhs_hi on the box X. Sound: no point of X satisfying
    the constraints is removed.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    _check_dims(rows.shape[1], X.dim, "contract_box")
    rhs_lo = np.broadcast_to(np.asarray(rhs_lo, dtype=float), (rows.shape[0],))
    rhs_hi = np.broadcast_to(np.asarray(rhs_hi, dtype=float), (rows.shape[0],))
    lo, hi = X.lower.copy(), X.upper.copy()
    order = list(range(rows.shape[0]))
    for _ in range(passes):
        for i in order + order[::-1]:
            idx, r_lo, r_hi = implied_ranges(rows[i], rhs_lo[i], rhs_hi[i], lo, hi)
            lo[idx] = np.maximum(lo[idx], r_lo)
            hi[idx] = np.minimum(hi[idx], r_hi)
            if np.any(lo > hi + MEMBERSHIP_TOL):
                return EmptySet(X.dim)
    return IntervalVector(np.minimum(lo, hi), np.maximum(lo, hi))


def intersect_interval(X: IntervalVector, Y: IntervalVector) -> MaybeEmpty:
    _check_dims(X.dim, Y.dim, "intersect_interval")
    lo, hi = np.maximum(X.lower, Y.lower), np.minimum(X.upper, Y.upper)
    if np.any(lo > hi):
        return EmptySet(X.dim)
    return IntervalVector(lo, hi)


def intersect_ellipsoid_strip(E: Ellipsoid, strip: Strip) -> MaybeEmpty:
    """
    Minimum-volume member of the weighted-sum family enclosing E ∩ strip:
        (1-λ)(x-a)ᵀP⁻¹(x-a) + λ (nᵀx - ρ)²/σ² ≤ 1,   λ ∈ [0, 1).
    """
    _check_dims(strip.dim, E.dim, "intersect_ellipsoid_strip")
    nvec = strip.normal
    extent = float(np.sqrt(nvec @ E.shape @ nvec))
    lo, hi = strip.bounds
    proj = float(nvec @ E.center)
    if proj - extent > hi + MEMBERSHIP_TOL or proj + extent < lo - MEMBERSHIP_TOL:
        return EmptySet(E.dim)
    if lo <= proj - extent and proj + extent <= hi:
        return E

    sigma = max(strip.half_width, ELLIPSOID_EPS)
    rho = strip.midpoint
    P_inv = np.linalg.inv(E.shape)
    a = E.center
    nn = np.outer(nvec, nvec) / sigma ** 2

    def member(lam: float):
        M = (1.0 - lam) * P_inv + lam * nn
        rhs = (1.0 - lam) * P_inv @ a + lam * nvec * rho / sigma ** 2
        center = np.linalg.solve(M, rhs)
        delta = (1.0 - lam) * a @ P_inv @ a + lam * rho ** 2 / sigma ** 2 - center @ M @ center
        return M, center, 1.0 - delta

    def log_volume(lam: float) -> float:
        M, _, scale = member(lam)
        if scale <= 0.0:
            return np.inf
        sign, logdet = np.linalg.slogdet(M)
        return E.dim * np.log(scale) - logdet if sign > 0 else np.inf

    res = minimize_scalar(log_volume, bounds=(0.0, 1.0 - 1e-9), method="bounded",
                          options={"xatol": 1e-8})
    lam = float(res.x) if log_volume(float(res.x)) <= log_volume(0.0) else 0.0
    M, center, scale = member(lam)
    if scale <= 0.0:
        return EmptySet(E.dim)
    return Ellipsoid(center, _regularized(scale * np.linalg.inv(M)))


# ------------------------------------------------------------------ #
# QUERIES                                                              #
# ------------------------------------------------------------------ #

def support(X, d) -> float:
    """ρ(X, d) = max_{x∈X} dᵀx."""
    d = np.asarray(d, dtype=float).reshape(-1)
    _check_dims(d.size, dimension(X), "support")
    if isinstance(X, EmptySet):
        raise EmptySetError("support of an empty set")
    if isinstance(X, IntervalVector):
        return float(d @ X.center + np.abs(d) @ X.radius)
    if isinstance(X, Ellipsoid):
        return float(d @ X.center + np.sqrt(max(d @ X.shape @ d, 0.0)))
    if isinstance(X, Zonotope):
        return float(d @ X.center + np.abs(d @ X.generators).sum())
    if isinstance(X, ZonotopeBundle):
        X = bundle_to_cz(X)
    if isinstance(X, ConstrainedZonotope):
        value = domain_support(X.generators, X.constraint_matrix, X.constraint_offset, d)
        if value is None:
            raise EmptySetError("support of an infeasible constrained zonotope")
        return float(d @ X.center + value)
    raise UnsupportedPairingError(f"support of {type(X).__name__}")


def interval_hull(X) -> IntervalVector:
    """Tightest axis-aligned box (LP-tight for CZ and bundles)."""
    if isinstance(X, EmptySet):
        raise EmptySetError("interval hull of an empty set")
    if isinstance(X, IntervalVector):
        return X
    if isinstance(X, Ellipsoid):
        return IntervalVector.from_center_radius(X.center, np.sqrt(np.diag(X.shape)))
    if isinstance(X, Zonotope):
        return IntervalVector.from_center_radius(X.center, np.abs(X.generators).sum(axis=1))
    if isinstance(X, ZonotopeBundle):
        X = bundle_to_cz(X)
    if isinstance(X, ConstrainedZonotope):
        n = X.dim
        eye = np.eye(n)
        upper = np.array([support(X, eye[i]) for i in range(n)])
        lower = np.array([-support(X, -eye[i]) for i in range(n)])
        return IntervalVector(np.minimum(lower, upper), np.maximum(lower, upper))
    raise UnsupportedPairingError(f"interval hull of {type(X).__name__}")


def zonotope_hull(X) -> IntervalVector:
    """Cheap box ignoring CZ constraints (the unconstrained generator image)."""
    if isinstance(X, ConstrainedZonotope):
        return IntervalVector.from_center_radius(X.center, np.abs(X.generators).sum(axis=1))
    if isinstance(X, ZonotopeBundle):
        hulls = [interval_hull(m) for m in X.members]
        lo = np.max([h.lower for h in hulls], axis=0)
        hi = np.min([h.upper for h in hulls], axis=0)
        return IntervalVector(np.minimum(lo, hi), np.maximum(lo, hi))
    return interval_hull(X)


def contains_point(X, x, tol: float = MEMBERSHIP_TOL) -> bool:
    x = np.asarray(x, dtype=float).reshape(-1)
    _check_dims(x.size, dimension(X), "contains_point")
    if isinstance(X, EmptySet):
        return False
    if isinstance(X, IntervalVector):
        return bool(np.all(X.lower - tol <= x) and np.all(x <= X.upper + tol))
    if isinstance(X, Ellipsoid):
        e = x - X.center
        return bool(e @ np.linalg.solve(X.shape, e) <= 1.0 + tol)
    if isinstance(X, ZonotopeBundle):
        return all(contains_point(m, x, tol) for m in X.members)
    if isinstance(X, Zonotope):
        X = ConstrainedZonotope.from_zonotope(X)
    if isinstance(X, ConstrainedZonotope):
        t = min_scaling(X.generators, X.constraint_matrix, X.constraint_offset, x - X.center)
        return t is not None and t <= 1.0 + tol
    raise UnsupportedPairingError(f"contains_point for {type(X).__name__}")


def enclose_ellipsoid(box: IntervalVector) -> Ellipsoid:
    """Ellipsoid through the box corners: P = n·diag(r²), flat axes get ε."""
    if not box.is_bounded():
        raise SetError("cannot enclose an unbounded box")
    r2 = np.maximum(box.radius ** 2, ELLIPSOID_EPS)
    return Ellipsoid(box.center, box.dim * np.diag(r2))


def hull_radius(X) -> Optional[float]:
    """Largest half-width of the cheap hull; None for EmptySet."""
    if isinstance(X, EmptySet):
        return None
    return float(np.max(zonotope_hull(X).radius, initial=0.0))
