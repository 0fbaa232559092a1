"""
Metrics — conservatism and timing of set estimates
===================================================
"""

from src.metrics.conservatism import (
    interval_volume_measure,
    mean_width,
    mean_width_measure,
    normalize,
    sample_directions,
)
from src.metrics.report import MetricReport, SeedResult, metric_report, write_metric_csv, write_seed_csv

__all__ = [
    "interval_volume_measure", "mean_width", "mean_width_measure", "normalize", "sample_directions",
    "MetricReport", "SeedResult", "metric_report", "write_metric_csv", "write_seed_csv",
]
