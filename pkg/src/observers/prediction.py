"""
Prediction Steps
=================
Enclose f(X_k, u_k) ⊕ W in the estimate's own representation:

    predict_mve           mean-value extension around the hull midpoint
    predict_linremainder  Taylor linearization + Hessian remainder box;
                          ellipsoids get the remainder as an enclosing
                          ellipsoid and a min-trace sum
    predict_dc            difference-of-convex affine bounds
"""

import numpy as np

from src.errors import ObserverError
from src.rangebound.dc import dc_enclosure
from src.rangebound.enclosures import apply_linearization, conservative_linearization, mean_value_extension
from src.sets.operations import enclose_ellipsoid, linear_map, minkowski_sum, translate
from src.sets.representations import Ellipsoid, EmptySet, IntervalVector, SetValue
from src.system.model import NonlinearDiscreteSystem


def _estimate(state) -> SetValue:
    X = state.estimate
    if X is None or isinstance(X, EmptySet):
        raise ObserverError(f"step {state.step}: no estimate to predict from")
    return X


def predict_mve(state, sys: NonlinearDiscreteSystem, u=None) -> SetValue:
    X = _estimate(state)
    return minkowski_sum(mean_value_extension(sys.f, X, None, u), sys.W)


def _predict_ellipsoid(E: Ellipsoid, sys: NonlinearDiscreteSystem, u) -> SetValue:
    lin = conservative_linearization(sys.f, E, None, u)
    image = translate(linear_map(lin.A, E), lin.offset)
    extra = minkowski_sum(lin.remainder, sys.W)
    if not np.any(extra.width):
        return translate(image, extra.center)
    return minkowski_sum(image, enclose_ellipsoid(extra))


def predict_linremainder(state, sys: NonlinearDiscreteSystem, u=None) -> SetValue:
    X = _estimate(state)
    if isinstance(X, Ellipsoid):
        return _predict_ellipsoid(X, sys, u)
    lin = conservative_linearization(sys.f, X, None, u)
    return minkowski_sum(apply_linearization(lin, X), sys.W)


def predict_dc(state, sys: NonlinearDiscreteSystem, u=None, split=None, vertex_limit_dim: int = 12) -> SetValue:
    if split is None:
        raise ObserverError("DC prediction needs a difference-of-convex split")
    X = _estimate(state)
    if isinstance(X, IntervalVector):
        raise ObserverError("DC prediction expects a zonotope or constrained zonotope")
    return minkowski_sum(dc_enclosure(split, X, u, vertex_limit_dim=vertex_limit_dim), sys.W)
