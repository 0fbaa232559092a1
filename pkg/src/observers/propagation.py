"""
Luenberger-Type Zonotope Propagation (FRad-C)
==============================================
No intersection: the measurement of the current estimate's time enters
through an output-injection gain L,

    X⁺ = (A - LC)X ⊕ (offset + L·y_k) ⊕ (-L)V ⊕ W ⊕ R

with A, offset, R from the conservative linearization over X. Any L is
sound; the default is the covariance-like gain
    L = A·P·Cᵀ (C·P·Cᵀ + S)⁺,   P = G·Gᵀ,  S = diag(rad(V)²).
"""

from typing import Optional

import numpy as np

from src.errors import ObserverError
from src.log import get_logger
from src.rangebound.enclosures import conservative_linearization
from src.sets.operations import linear_map, minkowski_sum, to_zonotope, translate
from src.sets.representations import Zonotope
from src.system.model import NonlinearDiscreteSystem

log = get_logger("FRAD-C")


def propagation_gain(A: np.ndarray, Z: Zonotope, sys: NonlinearDiscreteSystem) -> np.ndarray:
    if sys.r == 0:
        return np.zeros((sys.n, 0))
    P = Z.generators @ Z.generators.T
    C = sys.C
    S = C @ P @ C.T + np.diag(sys.V.radius ** 2)
    return A @ P @ C.T @ np.linalg.pinv(S)


def step_fradC(
    state,
    sys: NonlinearDiscreteSystem,
    u=None,
    y_prev: Optional[np.ndarray] = None,
    gain: Optional[np.ndarray] = None,
) -> Zonotope:
    """
    One propagation step. y_prev is the measurement at the time of the
    current estimate (state.last_measurement when omitted).
    """
    Z = state.estimate
    if not isinstance(Z, Zonotope):
        raise ObserverError(f"FRad-C propagates zonotopes, got {type(Z).__name__}")
    y = state.last_measurement if y_prev is None else y_prev
    if y is None:
        raise ObserverError("FRad-C needs the measurement of the current estimate")
    y = np.asarray(y, dtype=float).reshape(-1)

    lin = conservative_linearization(sys.f, Z, None, u)
    L = propagation_gain(lin.A, Z, sys) if gain is None else np.asarray(gain, dtype=float).reshape(sys.n, sys.r)

    closed_loop = lin.A - L @ sys.C
    result = translate(linear_map(closed_loop, Z), lin.offset + L @ y)
    if sys.r:
        result = minkowski_sum(result, linear_map(-L, to_zonotope(sys.V)))
    result = minkowski_sum(result, lin.remainder)
    result = minkowski_sum(result, sys.W)
    log.debug(f"gain norm {np.linalg.norm(L):.4g}, generators {result.n_generators}")
    return result.drop_zero_generators()
