"""
Range Bounding — guaranteed enclosures of nonlinear maps
=========================================================
Natural interval inclusion, mean-value extension, conservative
linearization, DC tangent bounds and mixed-monotone decomposition bounds,
all driven by one symbolic description of the dynamics.
"""

from src.rangebound.dc import DCBounds, DCSplit, dc_bounds, dc_enclosure
from src.rangebound.enclosures import (
    LinearizationResult,
    apply_linearization,
    conservative_linearization,
    hessian_interval,
    interval_eval,
    jacobian_interval,
    mean_value_extension,
)
from src.rangebound.expressions import SymbolicDynamics
from src.rangebound.interval_eval import IntervalMatrix
from src.rangebound.mixed_monotone import (
    DecompositionFunction,
    jacobian_sign_decomposition,
    lifted_decomposition,
    mixed_monotone_bounds,
)

__all__ = [
    "DCBounds", "DCSplit", "dc_bounds", "dc_enclosure",
    "LinearizationResult", "apply_linearization", "conservative_linearization",
    "hessian_interval", "interval_eval", "jacobian_interval", "mean_value_extension",
    "SymbolicDynamics", "IntervalMatrix",
    "DecompositionFunction", "jacobian_sign_decomposition", "lifted_decomposition",
    "mixed_monotone_bounds",
]
