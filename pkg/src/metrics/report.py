"""
Metric Reports
===============
Per-seed results of one (benchmark, method) cell are folded into one
MetricReport row:

    time_ms   mean wall-clock per observer step (reduction included,
              truth simulation and metric bookkeeping excluded)
    ṽ, w̃      mean over seeds; ∞ if any seed diverged inside the horizon
    v̂, ŵ      ṽ, w̃ divided by the best finite value of the comparison
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from src.metrics.conservatism import normalize

SUMMARY_COLUMNS = ("method", "category", "completed_steps", "diverged", "v_tilde", "w_tilde", "v_hat", "w_hat")
TABLE_COLUMNS = ("method", "category", "time_ms", "v_hat", "w_hat")
TIMING_COLUMNS = ("method", "time_ms")
SEED_COLUMNS = ("method", "seed", "completed_steps", "reason", "v_tilde", "w_tilde")


@dataclass(frozen=True)
class SeedResult:
    """Metrics of one method on one seed, over the (cut-off) horizon."""

    seed: int
    completed_steps: int
    diverged: bool
    reason: str
    v_tilde: float
    w_tilde: float
    step_ms: float


@dataclass
class MetricReport:
    method: str
    category: str
    time_ms: float
    v_tilde: float
    w_tilde: float
    v_hat: float = math.inf
    w_hat: float = math.inf
    completed_steps: int = 0
    diverged: bool = False
    per_seed: List[SeedResult] = field(default_factory=list)

    def row(self, columns: Sequence[str]) -> Dict[str, object]:
        return {c: getattr(self, c) for c in columns}


def _mean(values: Sequence[float]) -> float:
    if any(not math.isfinite(v) for v in values):
        return math.inf
    return math.fsum(values) / len(values)


def metric_report(
    results: Dict[str, List[SeedResult]],
    categories: Optional[Dict[str, str]] = None,
) -> List[MetricReport]:
    """
    One report per method, in the insertion order of results. Normalization
    needs at least one method without divergence; otherwise every v̂, ŵ is ∞.
    """
    categories = categories or {}
    reports = []
    for method, seeds in results.items():
        seeds = sorted(seeds, key=lambda s: s.seed)
        diverged = any(s.diverged for s in seeds)
        reports.append(MetricReport(
            method=method,
            category=categories.get(method, ""),
            time_ms=_mean([s.step_ms for s in seeds]) if seeds else math.inf,
            v_tilde=math.inf if diverged or not seeds else _mean([s.v_tilde for s in seeds]),
            w_tilde=math.inf if diverged or not seeds else _mean([s.w_tilde for s in seeds]),
            completed_steps=min((s.completed_steps for s in seeds), default=0),
            diverged=diverged or not seeds,
            per_seed=seeds,
        ))
    for key in ("v", "w"):
        values = [getattr(r, f"{key}_tilde") for r in reports]
        if any(math.isfinite(v) for v in values):
            for r, value in zip(reports, normalize(values)):
                setattr(r, f"{key}_hat", value)
    return reports


def _format(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


def write_metric_csv(path, reports: Sequence[MetricReport], columns: Sequence[str] = TABLE_COLUMNS) -> Path:
    """One row per report; floats as repr, ∞ as "inf"."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in reports:
            row = r.row(columns)
            writer.writerow([_format(row[c]) for c in columns])
    return path


def write_seed_csv(path, reports: Sequence[MetricReport]) -> Path:
    """Raw per-seed rows behind the summary."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SEED_COLUMNS)
        for r in reports:
            for s in r.per_seed:
                writer.writerow([
                    r.method, s.seed, s.completed_steps, s.reason or "ok",
                    _format(s.v_tilde), _format(s.w_tilde),
                ])
    return path
