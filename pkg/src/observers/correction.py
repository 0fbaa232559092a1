"""
Correction Steps
=================
Intersect a predicted set with the measurement strips
{x : y_j - c_jᵀx ∈ V_j}. Exact rules (czstrip, cz_exact, box) return subsets
of the prediction; gain rules return outer bounds of prediction ∩ strips.

A strip that misses the prediction means the measurement is inconsistent
with the model and EmptySet comes back.
"""

from typing import Sequence

import numpy as np

from src.config import MEMBERSHIP_TOL
from src.errors import ObserverError
from src.sets.operations import (
    contract_box,
    generalized_intersection,
    intersect_ellipsoid_strip,
    strip_intersection_gain,
    support,
)
from src.sets.reduction import reduce_constraints
from src.sets.representations import (
    ConstrainedZonotope,
    Ellipsoid,
    EmptySet,
    IntervalVector,
    MaybeEmpty,
    Strip,
    Zonotope,
    ZonotopeBundle,
)
from src.sets.strip_gains import (
    frobenius_gain,
    generator_elimination_gain,
    joint_frobenius_gain,
    joint_strip_intersection,
    volume_gain,
)

GAIN_RULES = {
    "frobenius": frobenius_gain,
    "volume": volume_gain,
    "generator_elimination": generator_elimination_gain,
}
RULES = (*GAIN_RULES, "joint_frobenius", "czstrip", "ellipsoid", "box", "bundle")


def _projected_range(X, nvec: np.ndarray):
    return -support(X, -nvec), support(X, nvec)


def _relation(X, strip: Strip) -> str:
    """'disjoint', 'inside' (strip contains X) or 'cut'."""
    lo, hi = strip.bounds
    p_lo, p_hi = _projected_range(X, strip.normal)
    if p_lo > hi + MEMBERSHIP_TOL or p_hi < lo - MEMBERSHIP_TOL:
        return "disjoint"
    if lo <= p_lo and p_hi <= hi:
        return "inside"
    return "cut"


def _zonotope_rule(Z: Zonotope, strips: Sequence[Strip], rule: str) -> MaybeEmpty:
    select = GAIN_RULES[rule]
    for strip in strips:
        relation = _relation(Z, strip)
        if relation == "disjoint":
            return EmptySet(Z.dim)
        if relation == "cut":
            Z = strip_intersection_gain(Z, strip, select(Z, strip)).drop_zero_generators()
    return Z


def _joint_rule(Z: Zonotope, strips: Sequence[Strip]) -> MaybeEmpty:
    cut = []
    for strip in strips:
        relation = _relation(Z, strip)
        if relation == "disjoint":
            return EmptySet(Z.dim)
        if relation == "cut":
            cut.append(strip)
    if not cut:
        return Z
    return joint_strip_intersection(Z, cut, joint_frobenius_gain(Z, cut))


def _cz_rule(X, strips: Sequence[Strip]) -> MaybeEmpty:
    rows, lo, hi = [], [], []
    for strip in strips:
        relation = _relation(X, strip)
        if relation == "disjoint":
            return EmptySet(X.dim)
        if relation == "cut":
            s_lo, s_hi = strip.bounds
            rows.append(strip.normal)
            lo.append(s_lo)
            hi.append(s_hi)
    if not rows:
        return X
    return generalized_intersection(X, np.vstack(rows), IntervalVector(np.array(lo), np.array(hi)))


def _ellipsoid_rule(E: Ellipsoid, strips: Sequence[Strip]) -> MaybeEmpty:
    for strip in strips:
        E = intersect_ellipsoid_strip(E, strip)
        if isinstance(E, EmptySet):
            return E
    return E


def _box_rule(X: IntervalVector, strips: Sequence[Strip]) -> MaybeEmpty:
    if not strips:
        return X
    rows = np.vstack([s.normal for s in strips])
    bounds = np.array([s.bounds for s in strips])
    return contract_box(X, rows, bounds[:, 0], bounds[:, 1])


def _bundle_rule(B: ZonotopeBundle, strips: Sequence[Strip]) -> MaybeEmpty:
    members = []
    for Z in B.members:
        corrected = _zonotope_rule(Z, strips, "frobenius")
        if isinstance(corrected, EmptySet):
            return corrected
        members.append(corrected)
    return ZonotopeBundle(tuple(members))


def correct_strip(predicted, strips: Sequence[Strip], gain_rule: str = "frobenius") -> MaybeEmpty:
    """Apply one correction rule for all measurement strips of a step."""
    if isinstance(predicted, EmptySet):
        return predicted
    strips = list(strips)
    mismatch = _rule_type_mismatch(predicted, gain_rule)
    if mismatch:
        raise ObserverError(mismatch)
    if gain_rule in GAIN_RULES:
        return _zonotope_rule(predicted, strips, gain_rule)
    if gain_rule == "joint_frobenius":
        return _joint_rule(predicted, strips)
    if gain_rule == "czstrip":
        return _cz_rule(predicted, strips)
    if gain_rule == "ellipsoid":
        return _ellipsoid_rule(predicted, strips)
    if gain_rule == "box":
        return _box_rule(predicted, strips)
    return _bundle_rule(predicted, strips)


_RULE_TYPES = {
    "joint_frobenius": (Zonotope,),
    "czstrip": (ConstrainedZonotope,),
    "ellipsoid": (Ellipsoid,),
    "box": (IntervalVector,),
    "bundle": (ZonotopeBundle,),
    **{rule: (Zonotope,) for rule in GAIN_RULES},
}


def _rule_type_mismatch(X, rule: str) -> str:
    if rule not in _RULE_TYPES:
        return f"unknown correction rule {rule!r}; choose from {RULES}"
    if not isinstance(X, _RULE_TYPES[rule]):
        return f"correction rule {rule!r} does not apply to {type(X).__name__}"
    return ""


def correct_cz_exact(
    predicted,
    C: np.ndarray,
    y,
    V: IntervalVector,
    max_constraints: int = 5,
    max_order: float = 30.0,
    method: str = "pca",
) -> MaybeEmpty:
    """
    {x ∈ X : Cx ∈ y - V} in one generalized intersection, then reduced to
    the constraint and order budgets.
    """
    if isinstance(predicted, EmptySet):
        return predicted
    y = np.asarray(y, dtype=float).reshape(-1)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if y.size == 0:
        result = predicted
    else:
        result = generalized_intersection(predicted, C, IntervalVector(y - V.upper, y - V.lower))
    if isinstance(result, EmptySet):
        return result
    if not isinstance(result, ConstrainedZonotope):
        result = ConstrainedZonotope.from_zonotope(result) if isinstance(result, Zonotope) else result
    return reduce_constraints(result, max_constraints, max_order, method)
