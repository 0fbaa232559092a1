"""
Ground-Truth Simulation
========================
Seeded simulation of the true system. Disturbances and noise are drawn
uniformly from W and V with numpy's default_rng; a fixed seed reproduces a
trajectory bit for bit.

Draw order per run: v_0, then (w_k, v_{k+1}) for k = 0..steps-1.
"""

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.errors import DomainViolationError, SimulationError
from src.log import get_logger
from src.sets.representations import IntervalVector
from src.system.model import NonlinearDiscreteSystem

log = get_logger("SIM")


def step_truth(sys: NonlinearDiscreteSystem, x, u, w) -> np.ndarray:
    """f(x, u) + w."""
    return sys.f.evaluate(x, u) + np.asarray(w, dtype=float)


def measure(sys: NonlinearDiscreteSystem, x, v) -> np.ndarray:
    """C·x + v; an empty vector when the system has no outputs."""
    if sys.r == 0:
        return np.zeros(0)
    return sys.C @ np.asarray(x, dtype=float) + np.asarray(v, dtype=float)


def sample_initial_state(R0: IntervalVector, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample from the initial box."""
    return rng.uniform(R0.lower, R0.upper)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """states (K+1, n), inputs (K, m), measurements (K+1, r)."""

    states: np.ndarray
    inputs: np.ndarray
    measurements: np.ndarray
    seed: int

    @property
    def steps(self) -> int:
        return self.inputs.shape[0]

    def to_csv(self, path: Union[str, Path]) -> None:
        """Columns: step, x1..xn, u1..um, y1..yr (no input on the last row)."""
        n, m, r = self.states.shape[1], self.inputs.shape[1], self.measurements.shape[1]
        header = (
            ["step"]
            + [f"x{i + 1}" for i in range(n)]
            + [f"u{j + 1}" for j in range(m)]
            + [f"y{j + 1}" for j in range(r)]
        )
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["# seed", self.seed])
            writer.writerow(header)
            for k in range(self.states.shape[0]):
                u = [repr(float(v)) for v in self.inputs[k]] if k < self.steps else [""] * m
                writer.writerow(
                    [k]
                    + [repr(float(v)) for v in self.states[k]]
                    + u
                    + [repr(float(v)) for v in self.measurements[k]]
                )

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Trajectory":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        seed = int(rows[0][1])
        header, body = rows[1], rows[2:]
        n = sum(1 for h in header if h.startswith("x"))
        m = sum(1 for h in header if h.startswith("u"))
        states = np.array([[float(v) for v in row[1:1 + n]] for row in body])
        inputs = np.array(
            [[float(v) for v in row[1 + n:1 + n + m]] for row in body[:-1]]
        ).reshape(len(body) - 1, m)
        measurements = np.array([[float(v) for v in row[1 + n + m:]] for row in body])
        return cls(states, inputs, measurements.reshape(len(body), -1), seed)


def _input_sequence(sys: NonlinearDiscreteSystem, u_seq, steps: int) -> np.ndarray:
    if u_seq is None:
        return np.zeros((steps, sys.m))
    u = np.asarray(u_seq, dtype=float).reshape(-1, sys.m) if sys.m else np.zeros((len(u_seq), 0))
    if u.shape[0] < steps:
        raise SimulationError(f"input sequence has {u.shape[0]} entries for {steps} steps", 0)
    return u[:steps]


def simulate(
    sys: NonlinearDiscreteSystem,
    x0,
    u_seq,
    steps: int,
    seed: int,
    rng: Optional[np.random.Generator] = None,
) -> Trajectory:
    """Trajectory with a measurement at every step including k = 0."""
    x = np.asarray(x0, dtype=float).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise SimulationError("initial state is not finite", 0)
    if sys.r and not sys.V.is_bounded():
        raise SimulationError("cannot sample measurement noise from an unbounded V", 0)
    rng = np.random.default_rng(seed) if rng is None else rng
    inputs = _input_sequence(sys, u_seq, steps)

    states = np.zeros((steps + 1, sys.n))
    measurements = np.zeros((steps + 1, sys.r))
    states[0] = x
    measurements[0] = measure(sys, x, rng.uniform(sys.V.lower, sys.V.upper))
    for k in range(steps):
        w = rng.uniform(sys.W.lower, sys.W.upper)
        try:
            x = step_truth(sys, x, inputs[k], w)
        except DomainViolationError as exc:
            raise SimulationError(str(exc), k + 1) from exc
        states[k + 1] = x
        measurements[k + 1] = measure(sys, x, rng.uniform(sys.V.lower, sys.V.upper))
    log.debug(f"simulated {steps} steps of {sys.name or 'system'} (seed {seed})")
    return Trajectory(states, inputs, measurements, seed)


def measurement_digest(trajectory: Trajectory) -> str:
    """sha256 of the measurement sequence (float64 bytes)."""
    data = np.ascontiguousarray(trajectory.measurements, dtype=np.float64)
    return hashlib.sha256(data.tobytes()).hexdigest()
