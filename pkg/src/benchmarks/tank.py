"""
n-Tank Cascade (Torricelli, Euler, d_T = 0.5)
==============================================
    x1⁺ = x1 + d_T/A·(-κ√(2g·x1) + (Bu)_1)
    xi⁺ = xi + d_T/A·( κ√(2g·x_{i-1}) - κ√(2g·xi) + (Bu)_i ),  i = 2..n

g = 9.81, A = 1, κ = 0.015. R0 = 20·1 ⊕ 4·Bⁿ, W = 0.001·Bⁿ, V = 0.2·Bʳ.
Inflow and measurement indices follow the 30-tank layout, filtered to ≤ n.
"""

from typing import Optional, Sequence

import numpy as np

from src.benchmarks.spec import BenchmarkSpec, ObserverBudgets
from src.errors import ConfigError
from src.rangebound.dc import DCSplit
from src.rangebound.expressions import SymbolicDynamics
from src.sets.operations import linear_map
from src.sets.representations import IntervalVector
from src.system.model import Augmentation, NonlinearDiscreteSystem

DT = 0.5
GRAVITY = 9.81
AREA = 1.0
KAPPA = 0.015
INPUT_VALUE = 0.1

INFLOW_TANKS = (1, 4, 5, 7, 9, 10, 13, 15, 16, 19, 21, 22, 25, 27, 28)
MEASURED_TANKS = (2, 4, 5, 7, 8, 10, 11, 13, 14, 16, 17, 19, 20, 21, 22, 23, 25, 26, 27, 28, 29)

DC_DOMAIN = (1e-6, 100.0)
MAX_AUGMENTED_DIM = 6


def _indices(layout: Sequence[int], n: int) -> tuple:
    return tuple(i for i in layout if i <= n)


def _outflow(i: int) -> str:
    return f"{KAPPA}*sqrt({2 * GRAVITY}*x{i})"


def _inflow_terms(n: int, inflow: Sequence[int]) -> dict:
    """tank index -> input symbol name."""
    return {tank: f"u{j + 1}" for j, tank in enumerate(inflow)}


def _component(i: int, inflow_map: dict) -> str:
    inner = []
    if i > 1:
        inner.append(_outflow(i - 1))
    inner.append(f"-{_outflow(i)}")
    if i in inflow_map:
        inner.append(inflow_map[i])
    return f"x{i} + {DT / AREA}*({' + '.join(inner)})"


def tank_dynamics(n: int, inflow: Sequence[int]) -> SymbolicDynamics:
    inflow_map = _inflow_terms(n, inflow)
    return SymbolicDynamics.from_text(
        [_component(i, inflow_map) for i in range(1, n + 1)],
        n_states=n,
        n_inputs=len(inflow),
        name=f"tank{n}",
    )


def make_tank(
    n: int,
    inflow: Optional[Sequence[int]] = None,
    measured: Optional[Sequence[int]] = None,
    input_value: float = INPUT_VALUE,
) -> BenchmarkSpec:
    if n < 2:
        raise ConfigError(f"tank: n must be >= 2, got {n}")
    inflow = _indices(INFLOW_TANKS, n) if inflow is None else tuple(inflow)
    measured = _indices(MEASURED_TANKS, n) if measured is None else tuple(measured)
    for i in (*inflow, *measured):
        if not 1 <= i <= n:
            raise ConfigError(f"tank: index {i} outside 1..{n}")

    C = np.zeros((len(measured), n))
    for row, i in enumerate(measured):
        C[row, i - 1] = 1.0
    system = NonlinearDiscreteSystem(
        f=tank_dynamics(n, inflow),
        C=C,
        W=IntervalVector.unit(n, 0.001),
        V=IntervalVector.unit(len(measured), 0.2),
        name=f"tank:{n}",
    )
    augmentation = tank_augment_redundant(n, inflow, measured) if n <= MAX_AUGMENTED_DIM and n % 2 == 0 else None
    return BenchmarkSpec(
        id=f"tank:{n}",
        system=system,
        R0=IntervalVector.from_center_radius(20.0 * np.ones(n), 4.0 * np.ones(n)),
        input_value=np.full(len(inflow), float(input_value)),
        budgets=ObserverBudgets(max_order=20, max_constraints=2 * n, partitions=5, reduction="pca"),
        steps=100,
        dc_split=tank_dc_split(n, inflow),
        augmentation=augmentation,
        notes={"inflow": list(inflow), "measured": list(measured)},
    )


def tank_dc_split(n: int, inflow: Optional[Sequence[int]] = None) -> DCSplit:
    """
    -√ is convex on the positive axis, so the own outflow stays in g and the
    upstream inflow +κ√(2g·x_{i-1}) enters h as its negative.
    """
    inflow = _indices(INFLOW_TANKS, n) if inflow is None else tuple(inflow)
    inflow_map = _inflow_terms(n, inflow)
    g_parts, h_parts = [], []
    for i in range(1, n + 1):
        own = f"x{i} - {DT / AREA}*{_outflow(i)}"
        if i in inflow_map:
            own += f" + {DT / AREA}*{inflow_map[i]}"
        g_parts.append(own)
        h_parts.append(f"-{DT / AREA}*{_outflow(i - 1)}" if i > 1 else "0")
    m = len(inflow)
    g = SymbolicDynamics.from_text(g_parts, n_states=n, n_inputs=m, name=f"tank{n}.g")
    h = SymbolicDynamics.from_text(h_parts, n_states=n, n_inputs=m, name=f"tank{n}.h")
    return DCSplit(g=g, h=h, domain=IntervalVector(np.full(n, DC_DOMAIN[0]), np.full(n, DC_DOMAIN[1])))


def tank_augment_redundant(
    n: int = 6,
    inflow: Optional[Sequence[int]] = None,
    measured: Optional[Sequence[int]] = None,
) -> Augmentation:
    """
    Adds s_p = x_{2p-1} + x_{2p} for p = 1..n/2. The exchange between the two
    tanks of a pair cancels, so
        s_p⁺ = s_p + d_T/A·(κ√(2g·x_{2p-2}) - κ√(2g·x_{2p}) + inflows of the pair).
    """
    if n > MAX_AUGMENTED_DIM or n % 2:
        raise ConfigError(
            f"tank:{n} is not augmented (pairwise sums are defined for even n ≤ {MAX_AUGMENTED_DIM})"
        )
    inflow = _indices(INFLOW_TANKS, n) if inflow is None else tuple(inflow)
    measured = _indices(MEASURED_TANKS, n) if measured is None else tuple(measured)
    inflow_map = _inflow_terms(n, inflow)
    pairs = n // 2

    texts = [_component(i, inflow_map) for i in range(1, n + 1)]
    for p in range(1, pairs + 1):
        first, second = 2 * p - 1, 2 * p
        inner = []
        if first > 1:
            inner.append(_outflow(first - 1))
        inner.append(f"-{_outflow(second)}")
        inner += [inflow_map[t] for t in (first, second) if t in inflow_map]
        texts.append(f"x{n + p} + {DT / AREA}*({' + '.join(inner)})")
    f = SymbolicDynamics.from_text(texts, n_states=n + pairs, n_inputs=len(inflow), name=f"tank{n}_aug")

    T = np.vstack([np.eye(n), np.zeros((pairs, n))])
    G = np.zeros((pairs, n + pairs))
    for p in range(pairs):
        T[n + p, 2 * p] = T[n + p, 2 * p + 1] = 1.0
        G[p, 2 * p] = G[p, 2 * p + 1] = -1.0
        G[p, n + p] = 1.0

    C = np.zeros((len(measured), n + pairs))
    for row, i in enumerate(measured):
        C[row, i - 1] = 1.0
    system = NonlinearDiscreteSystem(
        f=f,
        C=C,
        W=linear_map(T, IntervalVector.unit(n, 0.001)),
        V=IntervalVector.unit(len(measured), 0.2),
        name=f"tank_aug:{n}",
    )
    return Augmentation(system=system, constraint_matrix=G, lift=T, original_dim=n)
