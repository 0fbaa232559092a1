"""
Exception hierarchy shared by all packages.

Intersections never raise on emptiness (they return EmptySet); observers
turn any of these into the divergence flag instead of propagating them.
"""

from typing import Optional


class EstimationError(Exception):
    """Root of every error raised by this package."""


# ─── Sets ────────────────────────────────────────────────────────────

class SetError(EstimationError):
    pass


class DimensionMismatchError(SetError, ValueError):
    pass


class UnsupportedPairingError(SetError, TypeError):
    pass


class EmptySetError(SetError):
    """An operation that needs a nonempty set received EmptySet."""


# ─── Range bounding ──────────────────────────────────────────────────

class RangeBoundError(EstimationError):
    pass


class DomainViolationError(RangeBoundError):
    def __init__(self, message: str, node: Optional[str] = None):
        self.node = node
        super().__init__(f"{message} (at node: {node})" if node else message)


class UnsupportedExpressionError(RangeBoundError):
    pass


class InvalidIntervalError(RangeBoundError, ValueError):
    """Interval bounds out of order or NaN."""


class InvalidSplitError(RangeBoundError):
    pass


class VertexLimitError(RangeBoundError):
    """Vertex enumeration over the box was refused (2^n too large)."""


# ─── System model ────────────────────────────────────────────────────

class SimulationError(EstimationError):
    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"step {step}: {message}")


class OracleError(EstimationError):
    pass


# ─── Observers / metrics / harness ───────────────────────────────────

class ObserverError(EstimationError):
    pass


class MetricError(EstimationError):
    pass


class ConfigError(EstimationError):
    pass
