"""
Van der Pol Oscillator (Euler, d_T = 0.025)
============================================
    x1⁺ = x1 + d_T·x2
    x2⁺ = x2 + d_T·(µ(1 - x1²)x2 - x1)

C = [1 0], R0 = B², W = 0.001·B², V = 0.2·B, u ≡ 0.
"""

import numpy as np

from src.benchmarks.spec import BenchmarkSpec, ObserverBudgets
from src.errors import ConfigError
from src.rangebound.dc import DCSplit
from src.rangebound.expressions import SymbolicDynamics
from src.sets.operations import linear_map
from src.sets.representations import IntervalVector
from src.system.model import Augmentation, NonlinearDiscreteSystem

DT = 0.025
DC_DOMAIN_RADIUS = 3.0

# y1 = x1 + x2, y2 = x1 - x2
VDP_LIFT = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]])
VDP_EQUALITIES = np.array([[-1.0, -1.0, 1.0, 0.0], [-1.0, 1.0, 0.0, 1.0]])


def vdp_dynamics(mu: float) -> SymbolicDynamics:
    return SymbolicDynamics.from_text(
        [
            f"x1 + {DT}*x2",
            f"x2 + {DT}*({mu}*(1 - x1**2)*x2 - x1)",
        ],
        name=f"vdp(mu={mu})",
    )


def make_vdp(mu: float) -> BenchmarkSpec:
    if mu <= 0:
        raise ConfigError(f"vdp: mu must be > 0, got {mu}")
    system = NonlinearDiscreteSystem(
        f=vdp_dynamics(mu),
        C=np.array([[1.0, 0.0]]),
        W=IntervalVector.unit(2, 0.001),
        V=IntervalVector.unit(1, 0.2),
        name=f"vdp:{mu:g}",
    )
    return BenchmarkSpec(
        id=f"vdp:{mu:g}",
        system=system,
        R0=IntervalVector.unit(2),
        input_value=np.zeros(0),
        budgets=ObserverBudgets(max_order=30, max_constraints=5, partitions=5, reduction="pca"),
        steps=100,
        dc_split=vdp_dc_split(mu),
        augmentation=vdp_augment_redundant(mu),
    )


def vdp_dc_split(mu: float = 0.1, radius: float = DC_DOMAIN_RADIUS) -> DCSplit:
    """
    -µx1²x2 = (µ/8)[(x1² - 2x2)² - (x1² + 2x2)²]. Each square gets the same
    α·x1² added (α = 4·radius); that keeps both parts convex on
    [-radius, radius]² and cancels in g - h.
    """
    c = DT * mu / 8.0
    alpha = 4.0 * radius
    g = SymbolicDynamics.from_text(
        [
            f"x1 + {DT}*x2",
            f"x2 - {DT}*x1 + {DT * mu}*x2 + {c}*((x1**2 - 2*x2)**2 + {alpha}*x1**2)",
        ],
        name="vdp.g",
    )
    h = SymbolicDynamics.from_text(
        ["0", f"{c}*((x1**2 + 2*x2)**2 + {alpha}*x1**2)"],
        n_states=2,
        name="vdp.h",
    )
    return DCSplit(g=g, h=h, domain=IntervalVector.unit(2, radius))


def vdp_augment_redundant(mu: float = 0.1) -> Augmentation:
    """Four states [x1, x2, y1, y2] with G_aug·z = 0."""
    f = SymbolicDynamics.from_text(
        [
            f"x1 + {DT}*x2",
            f"x2 + {DT}*({mu}*(1 - x1**2)*x2 - x1)",
            f"x3 + {DT}*(x2 - x1 + {mu}*(1 - x1**2)*x2)",
            f"x4 + {DT}*(x2 + x1 - {mu}*(1 - x1**2)*x2)",
        ],
        name=f"vdp_aug(mu={mu})",
    )
    W = IntervalVector.unit(2, 0.001)
    system = NonlinearDiscreteSystem(
        f=f,
        C=np.array([[1.0, 0.0, 0.0, 0.0]]),
        W=linear_map(VDP_LIFT, W),
        V=IntervalVector.unit(1, 0.2),
        name=f"vdp_aug:{mu:g}",
    )
    return Augmentation(system=system, constraint_matrix=VDP_EQUALITIES, lift=VDP_LIFT, original_dim=2)
