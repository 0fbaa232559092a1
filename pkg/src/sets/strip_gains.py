"""
Strip-Gain Selectors
=====================
Every gain λ gives a valid outer bound of Z ∩ strip through
strip_intersection_gain; these selectors decide which member of that family
an estimator uses.

    frobenius_gain          minimizes ‖G'‖_F for one strip
    volume_gain             line search along the Frobenius direction,
                            objective = interval-hull volume of the result
    generator_elimination   candidates that cancel one generator each;
                            least hull volume wins
    joint_frobenius_gain    matrix gain for all strips of one measurement
"""

from typing import List, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from src.errors import DimensionMismatchError
from src.sets.operations import strip_intersection_gain
from src.sets.representations import Strip, Zonotope

_TINY = 1e-300


def _hull_log_volume(Z) -> float:
    radius = np.abs(Z.generators).sum(axis=1)
    return float(np.sum(np.log(np.maximum(radius, _TINY))))


def frobenius_gain(Z, strip: Strip) -> np.ndarray:
    """λ = GGᵀn / (nᵀGGᵀn + σ²); zero when the strip carries no information."""
    nvec = strip.normal
    Gn = Z.generators @ (Z.generators.T @ nvec)
    denom = float(nvec @ Gn + strip.half_width ** 2)
    if denom <= _TINY:
        return np.zeros(Z.dim)
    return Gn / denom


def volume_gain(Z, strip: Strip, xatol: float = 1e-8) -> np.ndarray:
    """t·λ_frobenius with t ∈ [0, 2] minimizing the hull volume of the result."""
    direction = frobenius_gain(Z, strip)
    if not np.any(direction):
        return direction

    def objective(t: float) -> float:
        return _hull_log_volume(strip_intersection_gain(Z, strip, t * direction))

    res = minimize_scalar(objective, bounds=(0.0, 2.0), method="bounded",
                          options={"xatol": xatol})
    t = float(res.x)
    # the bounded search never evaluates the endpoints
    for edge in (1.0, 0.0):
        if objective(edge) < objective(t):
            t = edge
    return t * direction


def generator_elimination_candidates(Z, strip: Strip) -> List[np.ndarray]:
    """Zero gain plus λ_j = g_j / (nᵀg_j) for each generator seen by the strip."""
    nvec = strip.normal
    candidates = [np.zeros(Z.dim)]
    projections = nvec @ Z.generators
    scale = max(1.0, float(np.max(np.abs(projections), initial=0.0)))
    for j, p in enumerate(projections):
        if abs(p) > 1e-12 * scale:
            candidates.append(Z.generators[:, j] / p)
    return candidates


def least_volume_gain(Z, strip: Strip, candidates: Sequence[np.ndarray]) -> np.ndarray:
    """Candidate with the smallest hull volume; ties keep the earliest."""
    best, best_value = candidates[0], np.inf
    for lam in candidates:
        value = _hull_log_volume(strip_intersection_gain(Z, strip, lam))
        if value < best_value:
            best, best_value = lam, value
    return best


def generator_elimination_gain(Z, strip: Strip) -> np.ndarray:
    return least_volume_gain(Z, strip, generator_elimination_candidates(Z, strip))


def joint_frobenius_gain(Z: Zonotope, strips: Sequence[Strip]) -> np.ndarray:
    """Λ = GGᵀCᵀ (CGGᵀCᵀ + diag σ²)⁺, one column per strip."""
    if not strips:
        return np.zeros((Z.dim, 0))
    C = np.vstack([s.normal for s in strips])
    if C.shape[1] != Z.dim:
        raise DimensionMismatchError(f"strip normals have {C.shape[1]} entries for dim {Z.dim}")
    sigma2 = np.array([s.half_width ** 2 for s in strips])
    P = Z.generators @ Z.generators.T
    S = C @ P @ C.T + np.diag(sigma2)
    return P @ C.T @ np.linalg.pinv(S)


def joint_strip_intersection(Z: Zonotope, strips: Sequence[Strip], gain: np.ndarray) -> Zonotope:
    """
    Outer bound of Z ∩ (all strips) for a matrix gain Λ:
        c' = c + Λ(ρ - Cc),  G' = [(I - ΛC)G, Λ diag(σ)]
    """
    if not strips:
        return Z
    C = np.vstack([s.normal for s in strips])
    rho = np.array([s.midpoint for s in strips])
    sigma = np.array([s.half_width for s in strips])
    center = Z.center + gain @ (rho - C @ Z.center)
    G = np.hstack([(np.eye(Z.dim) - gain @ C) @ Z.generators, gain * sigma])
    return Zonotope(center, G).drop_zero_generators()
