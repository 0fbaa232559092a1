"""
System Model
=============
    x_{k+1} = f(x_k, u_k) + w_k,   w_k ∈ W
    y_k     = C x_k + v_k,         v_k ∈ V

plus the redundant-state augmentation used by the interval observers:
a lifted system over z = T x whose equality rows G_aug z = 0 hold on every
lifted trajectory.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from src.errors import DimensionMismatchError, SetError
from src.rangebound.expressions import SymbolicDynamics
from src.sets.operations import linear_map
from src.sets.representations import IntervalVector, Strip, measurement_strips


@dataclass(frozen=True, eq=False)
class NonlinearDiscreteSystem:
    f: SymbolicDynamics
    C: np.ndarray
    W: IntervalVector
    V: IntervalVector
    name: str = ""

    def __post_init__(self):
        C = np.array(self.C, dtype=float)
        if C.size == 0:
            C = np.zeros((0, self.f.n_states))
        C = np.atleast_2d(C)
        C.setflags(write=False)
        object.__setattr__(self, "C", C)
        if self.f.n_outputs != self.f.n_states:
            raise DimensionMismatchError(
                f"dynamics map {self.f.n_states} states to {self.f.n_outputs} outputs"
            )
        if C.shape[1] != self.n:
            raise DimensionMismatchError(f"C has {C.shape[1]} columns for {self.n} states")
        if self.W.dim != self.n:
            raise DimensionMismatchError(f"W has dimension {self.W.dim}, expected {self.n}")
        if self.V.dim != self.r:
            raise DimensionMismatchError(f"V has dimension {self.V.dim}, expected {self.r}")
        if not self.W.is_bounded():
            raise SetError("disturbance bound W must be a bounded box")

    @property
    def n(self) -> int:
        return self.f.n_states

    @property
    def m(self) -> int:
        return self.f.n_inputs

    @property
    def r(self) -> int:
        return self.C.shape[0]

    def strips(self, y) -> List[Strip]:
        """Measurement strips of y, in row order."""
        if self.r == 0:
            return []
        return list(measurement_strips(self.C, y, self.V))


@dataclass(frozen=True, eq=False)
class Augmentation:
    """
    Lifted system over z = T·x (first rows of T are the identity) with
    equality constraints G_aug·z = 0.
    """

    system: NonlinearDiscreteSystem
    constraint_matrix: np.ndarray
    lift: np.ndarray
    original_dim: int

    def __post_init__(self):
        G = np.atleast_2d(np.array(self.constraint_matrix, dtype=float))
        T = np.atleast_2d(np.array(self.lift, dtype=float))
        N, n = self.system.n, self.original_dim
        if T.shape != (N, n):
            raise DimensionMismatchError(f"lift matrix has shape {T.shape}, expected {(N, n)}")
        if not np.allclose(T[:n], np.eye(n)):
            raise DimensionMismatchError("lift matrix must start with the identity")
        if G.shape[1] != N:
            raise DimensionMismatchError(f"constraint rows have {G.shape[1]} columns, expected {N}")
        G.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "constraint_matrix", G)
        object.__setattr__(self, "lift", T)

    @property
    def projection(self) -> np.ndarray:
        return np.eye(self.system.n)[: self.original_dim]

    def lift_state(self, x) -> np.ndarray:
        return self.lift @ np.asarray(x, dtype=float)

    def lift_box(self, X: IntervalVector) -> IntervalVector:
        return linear_map(self.lift, X)

    def project(self, X):
        """Estimate in original coordinates."""
        return linear_map(self.projection, X)
