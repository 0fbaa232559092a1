"""
Interval-Type Observers
========================
pDTDI   partitioned interval inclusion. Each coordinate of the next box is
        bounded separately: the current box is cut into p slabs along that
        coordinate, each slab is tightened by the redundant-state equalities
        G_aug·z = 0 (one forward-backward propagation pass), and the
        inclusion of f over every slab is united.

CZKH    f(x) = H·x + f̃(x) with H the mid Jacobian over the hull; f̃ is
        bounded in generator coordinates by a mixed-monotone decomposition
        and the constrained zonotope is mapped through H exactly.

ZBKH    the CZKH construction applied to every bundle member, plus the
        pure decomposition box of f as an extra member.
"""

from typing import Optional

import numpy as np

from src.errors import ObserverError
from src.log import get_logger
from src.rangebound.enclosures import interval_eval, jacobian_interval, mean_value_extension
from src.rangebound.expressions import SymbolicDynamics
from src.rangebound.mixed_monotone import lifted_decomposition, mixed_monotone_bounds
from src.sets.operations import (
    contract_box,
    interval_hull,
    intersect_interval,
    linear_map,
    minkowski_sum,
    zonotope_hull,
)
from src.sets.representations import (
    ConstrainedZonotope,
    EmptySet,
    IntervalVector,
    MaybeEmpty,
    SetValue,
    Zonotope,
    ZonotopeBundle,
)
from src.system.model import NonlinearDiscreteSystem

log = get_logger("INTERVAL")


# ------------------------------------------------------------------ #
# pDTDI                                                              #
# ------------------------------------------------------------------ #

def contract_equalities(X: IntervalVector, constraint_matrix: Optional[np.ndarray]) -> MaybeEmpty:
    """One forward-backward pass of G_aug·z = 0 on a box."""
    if constraint_matrix is None or constraint_matrix.shape[0] == 0:
        return X
    return contract_box(X, constraint_matrix, 0.0, 0.0)


def _slabs(X: IntervalVector, i: int, partitions: int):
    edges = np.linspace(X.lower[i], X.upper[i], partitions + 1)
    if X.width[i] == 0.0:
        edges = edges[[0, -1]]
    for a, b in zip(edges[:-1], edges[1:]):
        lo, hi = X.lower.copy(), X.upper.copy()
        lo[i], hi[i] = a, b
        yield IntervalVector(lo, hi)


def _inclusion(f: SymbolicDynamics, box: IntervalVector, u, inclusion: str) -> IntervalVector:
    natural = interval_eval(f, box, u)
    if inclusion == "natural":
        return natural
    centered = interval_hull(mean_value_extension(f, box, None, u))
    tight = intersect_interval(natural, centered)
    # both enclose f(box); an empty meet is round-off
    return natural if isinstance(tight, EmptySet) else tight


def partitioned_inclusion(
    f: SymbolicDynamics,
    X: IntervalVector,
    u=None,
    partitions: int = 5,
    constraint_matrix: Optional[np.ndarray] = None,
    inclusion: str = "natural",
) -> MaybeEmpty:
    """Box enclosing f(X ∩ {G_aug z = 0}); EmptySet if every slab is infeasible."""
    N = f.n_outputs
    lo, hi = np.full(N, np.inf), np.full(N, -np.inf)
    for i in range(N):
        for slab in _slabs(X, i, partitions):
            slab = contract_equalities(slab, constraint_matrix)
            if isinstance(slab, EmptySet):
                continue
            F = _inclusion(f, slab, u, inclusion)
            lo[i] = min(lo[i], F.lower[i])
            hi[i] = max(hi[i], F.upper[i])
    if np.any(lo > hi):
        return EmptySet(N)
    return IntervalVector(lo, hi)


def step_pdtdi(
    state,
    sys: NonlinearDiscreteSystem,
    u=None,
    partitions: int = 5,
    constraint_matrix: Optional[np.ndarray] = None,
    inclusion: str = "natural",
) -> MaybeEmpty:
    """Prediction of the (possibly lifted) box; correction is the box rule."""
    X = state.estimate
    if not isinstance(X, IntervalVector):
        raise ObserverError(f"pDTDI works on boxes, got {type(X).__name__}")
    predicted = partitioned_inclusion(sys.f, X, u, partitions, constraint_matrix, inclusion)
    if isinstance(predicted, EmptySet):
        return predicted
    return contract_equalities(minkowski_sum(predicted, sys.W), constraint_matrix)


# ------------------------------------------------------------------ #
# MIXED-MONOTONE REMAINDER (CZKH, ZBKH)                              #
# ------------------------------------------------------------------ #

def _generator_form(X: SetValue):
    if isinstance(X, (Zonotope, ConstrainedZonotope)):
        return X.center, X.generators
    raise ObserverError(f"mixed-monotone step needs generators, got {type(X).__name__}")


def mixed_monotone_image(f: SymbolicDynamics, X: SetValue, u=None) -> SetValue:
    """H·X ⊕ box(f̃ over the generator domain); same representation as X."""
    c, G = _generator_form(X)
    hull = zonotope_hull(X)
    H = jacobian_interval(f, hull, u).center
    d = lifted_decomposition(f, c, G, u, linear_part=H)
    remainder = mixed_monotone_bounds(d, IntervalVector.unit(G.shape[1]))
    return minkowski_sum(linear_map(H, X), remainder)


def decomposition_box(f: SymbolicDynamics, X: SetValue, u=None) -> IntervalVector:
    """f over X bounded by the decomposition of f itself (H = 0)."""
    c, G = _generator_form(X)
    d = lifted_decomposition(f, c, G, u)
    return mixed_monotone_bounds(d, IntervalVector.unit(G.shape[1]))


def step_mixedmonotone(state, sys: NonlinearDiscreteSystem, u=None) -> SetValue:
    """Prediction for CZKH (constrained zonotope) and ZBKH (bundle)."""
    X = state.estimate
    if isinstance(X, ConstrainedZonotope):
        return minkowski_sum(mixed_monotone_image(sys.f, X, u), sys.W)
    if isinstance(X, ZonotopeBundle):
        members = [mixed_monotone_image(sys.f, Z, u) for Z in X.members]
        box = decomposition_box(sys.f, X.members[-1], u)
        members.append(Zonotope.from_interval(box))
        log.debug(f"bundle prediction with {len(members)} members")
        return minkowski_sum(ZonotopeBundle(tuple(members)), sys.W)
    raise ObserverError(f"mixed-monotone observers keep a CZ or a bundle, got {type(X).__name__}")
