"""
System Model — dynamics, ground truth and the consistent-set oracle
====================================================================
"""

from src.system.model import Augmentation, NonlinearDiscreteSystem
from src.system.oracle import OracleCloud, consistent_set_oracle, propagate_cloud
from src.system.simulation import (
    Trajectory,
    measure,
    measurement_digest,
    sample_initial_state,
    simulate,
    step_truth,
)

__all__ = [
    "Augmentation", "NonlinearDiscreteSystem",
    "OracleCloud", "consistent_set_oracle", "propagate_cloud",
    "Trajectory", "measure", "measurement_digest", "sample_initial_state", "simulate",
    "step_truth",
]
