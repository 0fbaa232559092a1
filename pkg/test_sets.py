"""
Set Core Tests
===============
Representations, set algebra, strip gains and reductions against closed
forms and sampling oracles.

Usage:
    pytest test_sets.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import DimensionMismatchError, SetError, UnsupportedPairingError
from src.sets import serialization
from src.sets.operations import (
    contains_point,
    contract_box,
    enclose_ellipsoid,
    generalized_intersection,
    interval_hull,
    intersect_ellipsoid_strip,
    is_empty,
    linear_map,
    minkowski_sum,
    strip_intersection_gain,
    support,
    to_constrained,
)
from src.sets.reduction import (
    drop_dependent_constraints,
    reduce_bundle,
    reduce_constraints,
    reduce_zonotope,
)
from src.sets.representations import (
    ConstrainedZonotope,
    Ellipsoid,
    EmptySet,
    IntervalVector,
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

B2 = Zonotope(np.zeros(2), np.eye(2))


def _directions(n: int, count: int = 100, seed: int = 0) -> np.ndarray:
    D = np.random.default_rng(seed).standard_normal((count, n))
    return D / np.linalg.norm(D, axis=1, keepdims=True)


def _zonotope_samples(Z: Zonotope, count: int, rng) -> np.ndarray:
    xi = rng.uniform(-1.0, 1.0, size=(count, Z.n_generators))
    return Z.center + xi @ Z.generators.T


def _random_zonotope(rng, n: int = 2, r: int = 4) -> Zonotope:
    return Zonotope(rng.normal(size=n), rng.normal(size=(n, r)))


def _random_cz(rng, n: int = 2, r: int = 5, q: int = 2) -> ConstrainedZonotope:
    A = rng.normal(size=(q, r))
    xi0 = rng.uniform(-0.5, 0.5, size=r)
    return ConstrainedZonotope(rng.normal(size=n), rng.normal(size=(n, r)), A, A @ xi0)


def _contains(outer, inner, n: int, tol: float = 1e-7) -> bool:
    return all(support(outer, d) >= support(inner, d) - tol for d in _directions(n))


# ------------------------------------------------------------------ #
# Representations                                                    #
# ------------------------------------------------------------------ #

def test_interval_rejects_inverted_bounds():
    with pytest.raises(SetError):
        IntervalVector([1.0], [0.0])


def test_interval_rejects_mismatched_lengths():
    with pytest.raises(DimensionMismatchError):
        IntervalVector([0.0, 0.0], [1.0])


def test_ellipsoid_must_be_positive_definite():
    with pytest.raises(SetError):
        Ellipsoid([0.0, 0.0], np.diag([1.0, 0.0]))


def test_zonotope_without_generators_is_a_point():
    Z = Zonotope.point([1.0, 2.0])
    assert Z.n_generators == 0
    assert contains_point(Z, [1.0, 2.0])
    assert not contains_point(Z, [1.0, 2.1])


def test_strip_bounds_follow_the_noise_interval():
    s = Strip([1.0, 0.0], 2.0, -0.5, 0.25)
    assert s.bounds == (1.75, 2.5)
    assert s.half_width == pytest.approx(0.375)


def test_bundle_members_share_dimension():
    with pytest.raises(DimensionMismatchError):
        ZonotopeBundle((B2, Zonotope.point([0.0])))


# ------------------------------------------------------------------ #
# Minkowski sum / linear map                                         #
# ------------------------------------------------------------------ #

def test_interval_sum():
    S = minkowski_sum(IntervalVector([0.0], [1.0]), IntervalVector([2.0], [3.0]))
    assert np.allclose(S.lower, [2.0]) and np.allclose(S.upper, [4.0])


def test_zonotope_sum_concatenates_generators():
    S = minkowski_sum(B2, Zonotope(np.ones(2), 0.5 * np.eye(2)))
    assert np.allclose(S.center, [1.0, 1.0])
    assert np.allclose(S.generators, np.hstack([np.eye(2), 0.5 * np.eye(2)]))


def test_sum_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        minkowski_sum(B2, IntervalVector.unit(3))


def test_ellipsoid_plus_zonotope_is_unsupported():
    with pytest.raises(UnsupportedPairingError):
        minkowski_sum(Ellipsoid(np.zeros(2), np.eye(2)), B2)


def test_cz_sum_contains_sampled_sums():
    rng = np.random.default_rng(3)
    X = generalized_intersection(B2, np.array([[1.0, 1.0]]), IntervalVector([-0.5], [0.5]))
    W = generalized_intersection(Zonotope(np.ones(2), 0.5 * np.eye(2)), np.array([[1.0, -1.0]]),
                                 IntervalVector([-0.2], [0.2]))
    S = minkowski_sum(X, W)
    xs = [p for p in _zonotope_samples(B2, 400, rng) if abs(p.sum()) <= 0.5][:30]
    ws = [p for p in _zonotope_samples(Zonotope(np.ones(2), 0.5 * np.eye(2)), 400, rng)
          if abs(p[0] - p[1]) <= 0.2][:30]
    for x, w in zip(xs, ws):
        assert contains_point(S, x + w, tol=1e-7)


def test_ellipsoid_sum_contains_boundary_sums():
    E1 = Ellipsoid(np.zeros(2), np.diag([4.0, 1.0]))
    E2 = Ellipsoid(np.ones(2), np.diag([1.0, 9.0]))
    S = minkowski_sum(E1, E2)
    for t in np.linspace(0.0, 2 * np.pi, 24, endpoint=False):
        for s in np.linspace(0.0, 2 * np.pi, 24, endpoint=False):
            p = np.array([2 * np.cos(t), np.sin(t)]) + np.ones(2) + np.array([np.cos(s), 3 * np.sin(s)])
            assert contains_point(S, p, tol=1e-9)


def test_linear_map_of_interval_is_its_hull():
    X = linear_map(2.0 * np.eye(2), IntervalVector.unit(2))
    assert np.allclose(X.lower, [-2, -2]) and np.allclose(X.upper, [2, 2])


def test_linear_map_row_selection():
    X = linear_map(np.array([[1.0, 0.0]]), B2)
    assert isinstance(X, Zonotope)
    hull = interval_hull(X)
    assert np.allclose(hull.lower, [-1.0]) and np.allclose(hull.upper, [1.0])


def test_linear_map_rotation():
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    X = linear_map(R, Zonotope([1.0, 0.0], [[1.0, 0.0], [0.0, 2.0]]))
    assert np.allclose(X.center, [0.0, 1.0])
    assert np.allclose(X.generators, [[0.0, -2.0], [1.0, 0.0]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_zonotope_support_is_additive_and_transforms(seed):
    rng = np.random.default_rng(seed)
    Z1, Z2 = _random_zonotope(rng, 3, 3), _random_zonotope(rng, 3, 2)
    M = rng.normal(size=(2, 3))
    for d in _directions(3, 10, seed):
        assert support(minkowski_sum(Z1, Z2), d) == pytest.approx(support(Z1, d) + support(Z2, d), abs=1e-9)
    for d in _directions(2, 10, seed):
        assert support(linear_map(M, Z1), d) == pytest.approx(support(Z1, M.T @ d), abs=1e-9)


# ------------------------------------------------------------------ #
# Intersections                                                      #
# ------------------------------------------------------------------ #

def test_generalized_intersection_hull():
    X = generalized_intersection(B2, np.array([[1.0, 0.0]]), IntervalVector([0.5], [1.5]))
    assert isinstance(X, ConstrainedZonotope)
    hull = interval_hull(X)
    assert np.allclose(hull.lower, [0.5, -1.0], atol=1e-6)
    assert np.allclose(hull.upper, [1.0, 1.0], atol=1e-6)


def test_generalized_intersection_with_own_hull():
    rng = np.random.default_rng(1)
    Z = _random_zonotope(rng)
    X = generalized_intersection(Z, np.eye(2), interval_hull(Z))
    assert np.allclose(interval_hull(X).lower, interval_hull(Z).lower, atol=1e-6)
    assert np.allclose(interval_hull(X).upper, interval_hull(Z).upper, atol=1e-6)


def test_generalized_intersection_empty():
    X = generalized_intersection(B2, np.array([[1.0, 0.0]]), IntervalVector([2.0], [3.0]))
    assert isinstance(X, EmptySet)
    assert is_empty(X)


def test_generalized_intersection_keeps_consistent_points():
    rng = np.random.default_rng(5)
    Z = _random_zonotope(rng)
    C = np.array([[1.0, -0.5]])
    Y = IntervalVector([-0.3], [0.4])
    X = generalized_intersection(Z, C, Y)
    assert _contains(Z, X, 2)
    pts = _zonotope_samples(Z, 300, rng)
    inside = [p for p in pts if Y.lower[0] <= C[0] @ p <= Y.upper[0]]
    assert inside
    assert all(contains_point(X, p, tol=1e-7) for p in inside[:40])


def test_bundle_intersection_with_identity_appends_member():
    B = ZonotopeBundle((B2,))
    X = generalized_intersection(B, np.eye(2), IntervalVector([0.0, 0.0], [2.0, 2.0]))
    assert isinstance(X, ZonotopeBundle) and len(X.members) == 2
    assert np.allclose(interval_hull(X).lower, [0.0, 0.0], atol=1e-6)


def test_bundle_support_matches_its_intersection():
    R = np.array([[np.cos(np.pi / 4), -np.sin(np.pi / 4)], [np.sin(np.pi / 4), np.cos(np.pi / 4)]])
    B = ZonotopeBundle((B2, Zonotope(np.zeros(2), R)))
    d = np.array([1.0, 0.0])
    assert support(B, d) == pytest.approx(1.0, abs=1e-7)
    assert support(to_constrained(B), d) == pytest.approx(1.0, abs=1e-7)


def test_zero_gain_is_identity():
    s = Strip([1.0, 0.0], 0.3, -0.1, 0.1)
    assert strip_intersection_gain(B2, s, np.zeros(2)) is B2


def test_zero_width_strip_collapses_coordinate():
    s = Strip([1.0, 0.0], 0.0, 0.0, 0.0)
    Z = strip_intersection_gain(B2, s, np.array([1.0, 0.0]))
    hull = interval_hull(Z)
    assert hull.width[0] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose([hull.lower[1], hull.upper[1]], [-1.0, 1.0])


@pytest.mark.parametrize("select", [frobenius_gain, volume_gain, generator_elimination_gain])
def test_gain_selectors_enclose_intersection(select):
    rng = np.random.default_rng(11)
    for _ in range(3):
        Z = _random_zonotope(rng, 2, 5)
        c = rng.normal(size=2)
        mid = float(c @ Z.center)
        s = Strip(c, mid + 0.3, -0.4, 0.4)
        result = strip_intersection_gain(Z, s, select(Z, s))
        lo, hi = s.bounds
        pts = [p for p in _zonotope_samples(Z, 2000, rng) if lo <= c @ p <= hi]
        assert pts
        for p in pts[:60]:
            assert contains_point(result, p, tol=1e-7)


def test_joint_gain_encloses_intersection():
    rng = np.random.default_rng(2)
    Z = _random_zonotope(rng, 3, 6)
    strips = [Strip(np.eye(3)[0], float(Z.center[0]), -0.3, 0.3),
              Strip(np.eye(3)[2], float(Z.center[2]) + 0.2, -0.5, 0.5)]
    result = joint_strip_intersection(Z, strips, joint_frobenius_gain(Z, strips))
    pts = [p for p in _zonotope_samples(Z, 4000, rng)
           if all(s.bounds[0] <= s.normal @ p <= s.bounds[1] for s in strips)]
    assert pts
    for p in pts[:60]:
        assert contains_point(result, p, tol=1e-7)


def test_ellipsoid_strip_fusion():
    E = Ellipsoid(np.zeros(2), np.diag([4.0, 1.0]))
    inside = Strip([1.0, 0.0], 0.0, -3.0, 3.0)
    assert intersect_ellipsoid_strip(E, inside) is E
    assert isinstance(intersect_ellipsoid_strip(E, Strip([1.0, 0.0], 5.0, -0.1, 0.1)), EmptySet)

    cut = Strip([1.0, 0.0], 1.0, -0.5, 0.5)
    F = intersect_ellipsoid_strip(E, cut)
    assert np.linalg.det(F.shape) < np.linalg.det(E.shape)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-2, 2, size=(4000, 2))
    pts = [p for p in pts if p @ np.linalg.solve(E.shape, p) <= 1.0 and 0.5 <= p[0] <= 1.5]
    assert all(contains_point(F, p, tol=1e-9) for p in pts)


def test_contract_box_equality():
    X = contract_box(IntervalVector([0.0, -2.0], [1.0, 2.0]), [[1.0, 1.0]], 0.0, 0.0)
    assert np.allclose(X.lower, [0.0, -1.0]) and np.allclose(X.upper, [1.0, 0.0])


def test_contract_box_detects_infeasibility():
    X = contract_box(IntervalVector([0.0, 0.0], [1.0, 1.0]), [[1.0, 1.0]], 3.0, 4.0)
    assert isinstance(X, EmptySet)


# ------------------------------------------------------------------ #
# Hull / support / membership                                        #
# ------------------------------------------------------------------ #

def test_zonotope_hull():
    hull = interval_hull(Zonotope([1.0, 1.0], [[1.0, 1.0], [0.0, 1.0]]))
    assert np.allclose(hull.lower, [-1.0, 0.0]) and np.allclose(hull.upper, [3.0, 2.0])


def test_ellipsoid_hull_and_support():
    E = Ellipsoid(np.zeros(2), np.diag([4.0, 1.0]))
    hull = interval_hull(E)
    assert np.allclose(hull.lower, [-2.0, -1.0]) and np.allclose(hull.upper, [2.0, 1.0])
    assert support(E, [1.0, 0.0]) == pytest.approx(2.0)


def test_support_of_unit_box():
    assert support(B2, [1.0, 0.0]) == pytest.approx(1.0)


def test_support_bounds_samples():
    rng = np.random.default_rng(8)
    Z = _random_zonotope(rng, 2, 3)
    pts = _zonotope_samples(Z, 20000, rng)
    for d in _directions(2, 10):
        assert support(Z, d) >= float(np.max(pts @ d)) - 1e-9


def test_hull_of_empty_set_raises():
    with pytest.raises(SetError):
        interval_hull(EmptySet(2))


def test_contains_point_basics():
    rng = np.random.default_rng(4)
    Z = _random_zonotope(rng, 2, 3)
    assert contains_point(Z, Z.center)
    assert not contains_point(B2, [2.0, 0.0])
    assert all(contains_point(Z, p) for p in _zonotope_samples(Z, 50, rng))


def test_enclose_ellipsoid():
    E1 = enclose_ellipsoid(IntervalVector.unit(1))
    assert np.allclose(E1.shape, [[1.0]])
    E2 = enclose_ellipsoid(IntervalVector.unit(2))
    assert np.allclose(E2.shape, 2 * np.eye(2))
    for corner in ([1, 1], [1, -1], [-1, 1], [-1, -1]):
        q = np.asarray(corner, float) @ np.linalg.solve(E2.shape, np.asarray(corner, float))
        assert q == pytest.approx(1.0)


def test_enclose_degenerate_box_is_regularized():
    E = enclose_ellipsoid(IntervalVector([0.0, -1.0], [0.0, 1.0]))
    assert np.all(np.linalg.eigvalsh(E.shape) > 0)
    assert contains_point(E, [0.0, 1.0], tol=1e-9)


# ------------------------------------------------------------------ #
# Reductions                                                         #
# ------------------------------------------------------------------ #

def test_reduce_within_budget_is_noop():
    assert reduce_zonotope(B2, 2) is B2


def test_reduce_to_order_one():
    Z = Zonotope(np.zeros(2), np.hstack([np.eye(2), 0.1 * np.eye(2)]))
    R = reduce_zonotope(Z, 1)
    assert R.n_generators <= 2
    assert _contains(R, Z, 2)


@pytest.mark.parametrize("method", ["pca", "girard"])
def test_reduce_random_zonotope(method):
    Z = _random_zonotope(np.random.default_rng(9), 2, 10)
    R = reduce_zonotope(Z, 2, method)
    assert R.order <= 2
    assert _contains(R, Z, 2)


def test_reduce_rejects_order_below_one():
    with pytest.raises(SetError):
        reduce_zonotope(B2, 0.5)


def test_reduce_constraints_within_budget_is_noop():
    cz = _random_cz(np.random.default_rng(0), q=1)
    assert reduce_constraints(cz, 1, 10).n_constraints == 1


def test_duplicated_constraint_is_dropped_exactly():
    cz = _random_cz(np.random.default_rng(1), q=1)
    dup = ConstrainedZonotope(
        cz.center, cz.generators,
        np.vstack([cz.constraint_matrix, cz.constraint_matrix]),
        np.concatenate([cz.constraint_offset, cz.constraint_offset]),
    )
    assert drop_dependent_constraints(dup).n_constraints == 1
    R = reduce_constraints(dup, 1, 10)
    assert R.n_constraints == 1
    for d in _directions(2):
        assert support(R, d) == pytest.approx(support(cz, d), abs=1e-7)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_reduce_constraints_is_outer(seed):
    cz = _random_cz(np.random.default_rng(seed), r=6, q=3)
    R = reduce_constraints(cz, 1, 2)
    assert R.n_constraints <= 1
    assert R.n_generators <= 4
    assert _contains(R, cz, 2)


def test_reduce_bundle_caps_members():
    rng = np.random.default_rng(6)
    members = tuple(Zonotope(np.zeros(2), rng.normal(size=(2, 3))) for _ in range(7))
    B = ZonotopeBundle(members)
    R = reduce_bundle(B, 5, 3)
    assert len(R.members) == 3
    assert _contains(R, B, 2)


# ------------------------------------------------------------------ #
# Serialization                                                      #
# ------------------------------------------------------------------ #

def test_serialization_keeps_full_precision():
    cz = _random_cz(np.random.default_rng(2))
    back = serialization.loads(serialization.dumps(cz))
    assert isinstance(back, ConstrainedZonotope)
    assert np.array_equal(back.generators, cz.generators)
    assert np.array_equal(back.constraint_offset, cz.constraint_offset)
    assert isinstance(serialization.loads(serialization.dumps(EmptySet(3))), EmptySet)
    strip = serialization.loads(serialization.dumps(Strip([0.0, 1.0], 0.1, -0.2, 0.2)))
    assert strip.bounds == pytest.approx((-0.1, 0.3))
