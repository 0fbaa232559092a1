"""
Benchmark ids of the form ``<family>:<parameter>`` (vdp:0.1, vdp:5,
tank:6, tank:30) resolved to BenchmarkSpec instances.
"""

import difflib
from functools import lru_cache
from typing import Callable, Dict, Tuple

from src.benchmarks.spec import BenchmarkSpec
from src.benchmarks.tank import make_tank
from src.benchmarks.vdp import make_vdp
from src.errors import ConfigError

FAMILIES: Dict[str, Tuple[Callable[[str], BenchmarkSpec], str]] = {
    "vdp": (lambda p: make_vdp(float(p)), "Van der Pol oscillator, parameter µ"),
    "tank": (lambda p: make_tank(int(p)), "n-tank cascade, parameter n"),
}

SCENARIOS = ("vdp:0.1", "vdp:5", "tank:6", "tank:30")


def suggest(name: str, choices) -> str:
    close = difflib.get_close_matches(name, list(choices), n=3, cutoff=0.5)
    return f" (did you mean: {', '.join(close)}?)" if close else f" (known: {', '.join(choices)})"


def parse_benchmark_id(text: str) -> Tuple[str, str]:
    family, sep, param = text.strip().partition(":")
    if not sep or not param:
        raise ConfigError(f"benchmark id {text!r} must look like 'family:parameter'" + suggest(text, SCENARIOS))
    if family not in FAMILIES:
        raise ConfigError(f"unknown benchmark family {family!r}" + suggest(family, FAMILIES))
    return family, param


@lru_cache(maxsize=None)
def load_benchmark(benchmark_id: str) -> BenchmarkSpec:
    family, param = parse_benchmark_id(benchmark_id)
    factory, _ = FAMILIES[family]
    try:
        return factory(param)
    except ValueError as exc:
        raise ConfigError(f"benchmark {benchmark_id!r}: bad parameter {param!r} ({exc})") from exc


def build_benchmark(benchmark_id: str, inflow=None, measured=None) -> BenchmarkSpec:
    """load_benchmark plus the tank index-set overrides of a run config."""
    if inflow is None and measured is None:
        return load_benchmark(benchmark_id)
    family, param = parse_benchmark_id(benchmark_id)
    if family != "tank":
        raise ConfigError(f"index overrides only apply to tank benchmarks, not {benchmark_id!r}")
    try:
        n = int(param)
    except ValueError as exc:
        raise ConfigError(f"benchmark {benchmark_id!r}: bad parameter {param!r}") from exc
    return make_tank(n, inflow=inflow, measured=measured)
