"""
Harness — run configs, comparison runner and CLI
=================================================
"""

from src.harness.cli import cli
from src.harness.config import RunConfig, load_run_config, parse_run_config
from src.harness.runner import RunOutcome, RunRecord, run_cell, run_comparison, simulate_seed

__all__ = [
    "cli",
    "RunConfig", "load_run_config", "parse_run_config",
    "RunOutcome", "RunRecord", "run_cell", "run_comparison", "simulate_seed",
]
