"""
Benchmarks — Van der Pol and the n-tank cascade
================================================
"""

from src.benchmarks.registry import SCENARIOS, load_benchmark, parse_benchmark_id
from src.benchmarks.spec import BenchmarkSpec, ObserverBudgets
from src.benchmarks.tank import make_tank, tank_augment_redundant, tank_dc_split
from src.benchmarks.vdp import make_vdp, vdp_augment_redundant, vdp_dc_split

__all__ = [
    "SCENARIOS", "load_benchmark", "parse_benchmark_id",
    "BenchmarkSpec", "ObserverBudgets",
    "make_tank", "tank_augment_redundant", "tank_dc_split",
    "make_vdp", "vdp_augment_redundant", "vdp_dc_split",
]
