"""
Observers — set-based state estimators
=======================================
Intersection-based (ellipsoid, zonotope, constrained zonotope),
propagation-based (Luenberger-type zonotope) and interval-type observers
behind one step interface: init_observer / observer_step.
"""

from src.observers.correction import correct_cz_exact, correct_strip
from src.observers.dispatcher import init_observer, observer_step, observer_system, project_estimate
from src.observers.interval_methods import partitioned_inclusion, step_mixedmonotone, step_pdtdi
from src.observers.methods import (
    METHOD_TABLE,
    Category,
    ObserverConfig,
    ObserverMethod,
    Representation,
    method_catalog,
)
from src.observers.prediction import predict_dc, predict_linremainder, predict_mve
from src.observers.propagation import step_fradC
from src.observers.state import ObserverState

__all__ = [
    "correct_cz_exact", "correct_strip",
    "init_observer", "observer_step", "observer_system", "project_estimate",
    "partitioned_inclusion", "step_mixedmonotone", "step_pdtdi",
    "METHOD_TABLE", "Category", "ObserverConfig", "ObserverMethod", "Representation", "method_catalog",
    "predict_dc", "predict_linremainder", "predict_mve",
    "step_fradC",
    "ObserverState",
]
