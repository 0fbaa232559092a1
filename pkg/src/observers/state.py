"""Observer state carried from one step to the next."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.sets.representations import IntervalVector, MaybeEmpty

# divergence reason codes
INCONSISTENT = "inconsistent measurement"
DOMAIN_VIOLATION = "domain violation"
NON_FINITE = "non-finite"
UNBOUNDED = "unbounded"
TIMEOUT = "step timeout"
VERTEX_LIMIT = "vertex limit"
INVALID_SPLIT = "invalid split"
SET_FAILURE = "set operation failed"
NUMERICAL = "numerical failure"
OBSERVER_FAILURE = "observer failure"


@dataclass(frozen=True, eq=False)
class ObserverState:
    """
    estimate is in the observer's own coordinates (lifted for an augmented
    pDTDI). hull is the LP-tight interval hull of the estimate in the
    benchmark coordinates, filled in once the step has been checked. Once
    diverged, a state never recovers.
    """

    estimate: Optional[MaybeEmpty]
    step: int = 0
    diverged: bool = False
    reason: str = ""
    detail: str = ""
    last_measurement: Optional[np.ndarray] = None
    hull: Optional[IntervalVector] = None

    def advance(self, estimate, **changes) -> "ObserverState":
        return replace(self, estimate=estimate, step=self.step + 1, hull=None, **changes)

    def diverge(self, reason: str, detail: str = "") -> "ObserverState":
        return replace(self, estimate=None, hull=None, step=self.step + 1, diverged=True, reason=reason, detail=detail)
