"""
Observer Step Dispatcher
=========================
Pipeline per step:

    estimate_k ──▶ predict (method) ──▶ correct with y_{k+1} ──▶ reduce ──▶ estimate_{k+1}

init_observer turns R0 into the method's representation and applies the
step-0 correction with y_0. Failures never escape as exceptions from
observer_step: the state is marked diverged with a reason code, and a
diverged state stays diverged. Every accepted estimate carries its
interval hull, so hull LP failures also end as a divergence.
"""

import time
from dataclasses import replace

import numpy as np

from src.config import DIVERGENCE_RADIUS, STEP_TIMEOUT_S
from src.errors import (
    DomainViolationError,
    EstimationError,
    InvalidSplitError,
    ObserverError,
    RangeBoundError,
    SetError,
    VertexLimitError,
)
from src.log import get_logger
from src.observers import state as reasons
from src.observers.correction import correct_cz_exact, correct_strip
from src.observers.interval_methods import contract_equalities, step_mixedmonotone, step_pdtdi
from src.observers.methods import ObserverConfig, ObserverMethod, Representation
from src.observers.prediction import predict_dc, predict_linremainder, predict_mve
from src.observers.propagation import step_fradC
from src.observers.state import ObserverState
from src.sets.operations import enclose_ellipsoid, hull_radius, interval_hull
from src.sets.reduction import reduce_bundle, reduce_constraints, reduce_zonotope
from src.sets.representations import (
    ConstrainedZonotope,
    Ellipsoid,
    EmptySet,
    IntervalVector,
    SetValue,
    Zonotope,
    ZonotopeBundle,
)
from src.system.model import NonlinearDiscreteSystem

log = get_logger("OBSERVER")

_EXPECTED_TYPES = {
    Representation.ELLIPSOID: Ellipsoid,
    Representation.ZONOTOPE: Zonotope,
    Representation.CONSTRAINED_ZONOTOPE: ConstrainedZonotope,
    Representation.INTERVAL: IntervalVector,
    Representation.BUNDLE: ZonotopeBundle,
}


def observer_system(config: ObserverConfig, sys: NonlinearDiscreteSystem) -> NonlinearDiscreteSystem:
    """System the observer runs on (lifted when pDTDI is augmented)."""
    return config.augmentation.system if config.augmentation is not None else sys


def _constraint_matrix(config: ObserverConfig):
    return config.augmentation.constraint_matrix if config.augmentation is not None else None


# ------------------------------------------------------------------ #
# SETUP                                                              #
# ------------------------------------------------------------------ #

def _initial_set(config: ObserverConfig, R0: IntervalVector) -> SetValue:
    rep = config.spec.representation
    if rep is Representation.ELLIPSOID:
        return enclose_ellipsoid(R0)
    if rep is Representation.ZONOTOPE:
        return Zonotope.from_interval(R0)
    if rep is Representation.CONSTRAINED_ZONOTOPE:
        return ConstrainedZonotope.from_zonotope(Zonotope.from_interval(R0))
    if rep is Representation.BUNDLE:
        return ZonotopeBundle((Zonotope.from_interval(R0),))
    if config.augmentation is not None:
        return contract_equalities(config.augmentation.lift_box(R0), _constraint_matrix(config))
    return R0


def init_observer(config: ObserverConfig, sys: NonlinearDiscreteSystem, R0: IntervalVector, y0) -> ObserverState:
    """Estimate at step 0: R0 in the method's representation, corrected with y_0."""
    config.validate(sys.n)
    if R0.dim != sys.n:
        raise ObserverError(f"R0 has dimension {R0.dim}, system has {sys.n}")
    y0 = np.asarray(y0, dtype=float).reshape(-1)
    start = ObserverState(estimate=_initial_set(config, R0), step=-1)
    if config.method is ObserverMethod.FRAD_C:
        return _guarded(config, start, lambda: ObserverState(estimate=start.estimate, step=0, last_measurement=y0))
    return _guarded(config, start, lambda: _correct_and_reduce(config, observer_system(config, sys), start.estimate, y0))


# ------------------------------------------------------------------ #
# STEP                                                               #
# ------------------------------------------------------------------ #

def _reduce(config: ObserverConfig, X):
    if isinstance(X, Zonotope):
        return reduce_zonotope(X, config.max_order, config.reduction)
    if isinstance(X, ConstrainedZonotope):
        return reduce_constraints(X, config.max_constraints, config.max_order, config.reduction)
    if isinstance(X, ZonotopeBundle):
        return reduce_bundle(X, config.max_order, config.max_members, config.reduction)
    return X


def _correct_and_reduce(config: ObserverConfig, sys: NonlinearDiscreteSystem, predicted, y) -> SetValue:
    spec = config.spec
    if spec.correction == "cz_exact":
        return correct_cz_exact(
            predicted, sys.C, y, sys.V, config.max_constraints, config.max_order, config.reduction
        )
    corrected = correct_strip(predicted, sys.strips(y), spec.correction)
    if isinstance(corrected, EmptySet):
        return corrected
    if spec.correction == "box":
        corrected = contract_equalities(corrected, _constraint_matrix(config))
        if isinstance(corrected, EmptySet):
            return corrected
    return _reduce(config, corrected)


def _predict(config: ObserverConfig, state: ObserverState, sys: NonlinearDiscreteSystem, u) -> SetValue:
    method = config.method
    prediction = config.spec.prediction
    if method is ObserverMethod.PDTDI:
        return step_pdtdi(state, sys, u, config.partitions, _constraint_matrix(config), config.inclusion)
    if prediction == "mixed_monotone":
        return step_mixedmonotone(state, sys, u)
    if prediction == "mve":
        return predict_mve(state, sys, u)
    if prediction == "linremainder":
        return predict_linremainder(state, sys, u)
    if prediction == "dc":
        return predict_dc(state, sys, u, config.dc_split, config.dc_vertex_limit_dim)
    raise ObserverError(f"{method.value}: no prediction rule {prediction!r}")


def _advance(config: ObserverConfig, state: ObserverState, sys: NonlinearDiscreteSystem, u, y) -> ObserverState:
    if config.method is ObserverMethod.FRAD_C:
        propagated = step_fradC(state, sys, u, gain=config.gain_override)
        return state.advance(_reduce(config, propagated), last_measurement=np.asarray(y, dtype=float).reshape(-1))
    predicted = _predict(config, state, sys, u)
    return state.advance(_correct_and_reduce(config, sys, predicted, y))


class _Diverged(Exception):
    """Raised inside a step when the new estimate is unusable."""

    def __init__(self, reason: str, detail: str):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}")


def _check(config: ObserverConfig, state: ObserverState) -> ObserverState:
    """Attach the hull of a new estimate, or raise _Diverged."""
    X = state.estimate
    if isinstance(X, EmptySet):
        raise _Diverged(reasons.INCONSISTENT, f"empty estimate at step {state.step}")
    expected = _EXPECTED_TYPES[config.spec.representation]
    if not isinstance(X, expected):
        raise _Diverged(
            reasons.OBSERVER_FAILURE,
            f"{config.method.value} produced {type(X).__name__}, expected {expected.__name__}",
        )
    radius = hull_radius(X)
    if radius is None or not np.isfinite(radius):
        raise _Diverged(reasons.NON_FINITE, f"hull radius {radius}")
    if radius > DIVERGENCE_RADIUS:
        raise _Diverged(reasons.UNBOUNDED, f"hull radius {radius:.3e}")
    hull = interval_hull(project_estimate(config, state))
    if not (np.all(np.isfinite(hull.lower)) and np.all(np.isfinite(hull.upper))):
        raise _Diverged(reasons.NON_FINITE, "interval hull has non-finite bounds")
    return replace(state, hull=hull)


def _guarded(config: ObserverConfig, state: ObserverState, run) -> ObserverState:
    """
    Run one step; map every failure to a divergence reason.

    The step timeout is checked once the step returns, so a step that never
    returns is not interrupted here.
    """
    started = time.perf_counter()
    try:
        result = run()
        nxt = state.advance(result) if not isinstance(result, ObserverState) else result
        nxt = _check(config, nxt)
    except _Diverged as exc:
        nxt = state.diverge(exc.reason, exc.detail)
    except DomainViolationError as exc:
        nxt = state.diverge(reasons.DOMAIN_VIOLATION, str(exc))
    except VertexLimitError as exc:
        nxt = state.diverge(reasons.VERTEX_LIMIT, str(exc))
    except InvalidSplitError as exc:
        nxt = state.diverge(reasons.INVALID_SPLIT, str(exc))
    except (SetError, RangeBoundError) as exc:
        nxt = state.diverge(reasons.SET_FAILURE, str(exc))
    except ObserverError as exc:
        nxt = state.diverge(reasons.OBSERVER_FAILURE, str(exc))
    except EstimationError as exc:
        nxt = state.diverge(reasons.SET_FAILURE, str(exc))
    except (ArithmeticError, ValueError, TypeError, np.linalg.LinAlgError) as exc:
        nxt = state.diverge(reasons.NUMERICAL, f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - started
    if not nxt.diverged and elapsed > STEP_TIMEOUT_S:
        nxt = state.diverge(reasons.TIMEOUT, f"{elapsed:.1f}s > {STEP_TIMEOUT_S}s")
    if nxt.diverged:
        log.info(f"{config.method.value} diverged at step {nxt.step}: {nxt.reason} ({nxt.detail})")
    return nxt


def observer_step(config: ObserverConfig, state: ObserverState, sys: NonlinearDiscreteSystem, u, y) -> ObserverState:
    """
    estimate_k → estimate_{k+1} using u_k and y_{k+1}.

    Args:
        config: method and budgets
        state: current state (a diverged state is passed through)
        sys: the benchmark system in original coordinates
        u: input applied at step k
        y: measurement at step k+1

    Returns:
        The next state; diverged with a reason code on any failure
    """
    if state.diverged:
        return state.diverge(state.reason, state.detail)
    sys = observer_system(config, sys)
    return _guarded(config, state, lambda: _advance(config, state, sys, u, y))


def project_estimate(config: ObserverConfig, state: ObserverState):
    """Estimate in the benchmark's coordinates (redundant states dropped)."""
    if state.diverged or state.estimate is None:
        return None
    if config.augmentation is not None:
        return config.augmentation.project(state.estimate)
    return state.estimate
