"""
Benchmark description shared by the factories and the harness.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from src.rangebound.dc import DCSplit
from src.sets.representations import IntervalVector
from src.system.model import Augmentation, NonlinearDiscreteSystem


@dataclass(frozen=True)
class ObserverBudgets:
    max_order: float
    max_constraints: int
    partitions: int = 5
    reduction: str = "pca"


@dataclass(frozen=True, eq=False)
class BenchmarkSpec:
    id: str
    system: NonlinearDiscreteSystem
    R0: IntervalVector
    input_value: np.ndarray
    budgets: ObserverBudgets
    steps: int = 100
    dc_split: Optional[DCSplit] = None
    augmentation: Optional[Augmentation] = None
    notes: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.system.n

    def input_sequence(self, steps: Optional[int] = None) -> np.ndarray:
        """Constant known input, one row per step."""
        k = self.steps if steps is None else steps
        return np.tile(np.asarray(self.input_value, dtype=float), (k, 1)).reshape(k, self.system.m)

    def with_steps(self, steps: int) -> "BenchmarkSpec":
        return replace(self, steps=steps)
