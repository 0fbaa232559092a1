"""
Comparison Runner
==================
The grid (method × seed) of one benchmark:

    seed ──▶ x0, w, v ──▶ truth trajectory ──┬──▶ observer 1 ──▶ hulls, timings, ṽ, w̃
                                             ├──▶ observer 2 ──▶ ...
                                             └──▶ ...

Every cell rebuilds the benchmark and the trajectory from the seed, so all
observers of a seed consume the same measurements (checked through the
measurement digests) and the same width directions.

Output directory:
    summary.csv, seeds.csv                deterministic (byte-identical reruns)
    summary_k<cutoff>.csv, seeds_k<...>   deterministic, partial horizon
    hulls/<method>_seed<k>.csv            deterministic, per-step interval hulls
    trajectories/seed<k>.csv              deterministic, truth and measurements
    sets/<method>_seed<k>.json            deterministic, only with dump_sets
    manifest.json                         deterministic
    table.csv, timing.csv                 wall-clock, not covered by identity
"""

import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.errors import EstimationError
from src.harness.config import RunConfig
from src.log import get_logger
from src.metrics.conservatism import interval_volume_measure, mean_width, sample_directions
from src.metrics.report import (
    SUMMARY_COLUMNS,
    TABLE_COLUMNS,
    TIMING_COLUMNS,
    MetricReport,
    SeedResult,
    metric_report,
    write_metric_csv,
    write_seed_csv,
)
from src.observers.dispatcher import init_observer, observer_step, project_estimate
from src.observers.methods import METHOD_TABLE, ObserverMethod
from src.observers.state import SET_FAILURE
from src.sets import serialization
from src.system.simulation import Trajectory, measurement_digest, sample_initial_state, simulate

log = get_logger("HARNESS")

FORMAT_VERSION = 1
_VERSIONED_PACKAGES = ("numpy", "scipy", "sympy")


@dataclass
class RunRecord:
    """One observer on one seed."""

    method: str
    seed: int
    hulls: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    step_ms: List[float] = field(default_factory=list)
    diverged_step: Optional[int] = None
    reason: str = ""
    detail: str = ""
    digest: str = ""
    results: Dict[Optional[int], SeedResult] = field(default_factory=dict)
    dumps: Optional[list] = None


@dataclass
class RunOutcome:
    out: Path
    reports: List[MetricReport]
    cutoff_reports: Optional[List[MetricReport]]
    files: List[Path]

    @property
    def all_diverged(self) -> bool:
        return all(r.diverged for r in self.reports)


# ------------------------------------------------------------------ #
# ONE CELL                                                           #
# ------------------------------------------------------------------ #

def simulate_seed(benchmark, seed: int, steps: int) -> Trajectory:
    """Truth trajectory of a seed; x0 has its own stream so noise draws stay aligned."""
    x0 = sample_initial_state(benchmark.R0, np.random.default_rng([seed, 1]))
    return simulate(benchmark.system, x0, benchmark.input_sequence(steps), steps, seed)


def _seed_result(record: RunRecord, boxes: list, widths: list, horizon: int, n: int) -> SeedResult:
    diverged = record.diverged_step is not None and record.diverged_step <= horizon
    completed = min(horizon, len(boxes))
    times = record.step_ms[:horizon]
    step_ms = math.fsum(times) / len(times) if times else math.inf
    if diverged or completed < horizon:
        return SeedResult(record.seed, completed, True, record.reason or "incomplete", math.inf, math.inf, step_ms)
    return SeedResult(
        record.seed,
        completed,
        False,
        "",
        interval_volume_measure(boxes[:horizon], n),
        math.fsum(widths[:horizon]) / horizon,
        step_ms,
    )


def run_cell(run: RunConfig, method: ObserverMethod, seed: int) -> RunRecord:
    """Run one observer over the full horizon of one seed (picklable entry point)."""
    benchmark = run.load_benchmark()
    config = run.observer_config(method, benchmark)
    sys = benchmark.system
    traj = simulate_seed(benchmark, seed, run.steps)
    directions = sample_directions(benchmark.n, run.direction_seed)
    record = RunRecord(method=method.value, seed=seed, digest=measurement_digest(traj))
    record.dumps = [] if run.dump_sets else None

    state = init_observer(config, sys, benchmark.R0, traj.measurements[0])
    boxes, widths = [], []

    def keep(state_) -> bool:
        if state_.diverged:
            record.diverged_step, record.reason, record.detail = state_.step, state_.reason, state_.detail
            return False
        estimate = project_estimate(config, state_)
        if state_.step > 0:
            try:
                width = mean_width(estimate, directions)
            except EstimationError as exc:
                record.diverged_step, record.reason, record.detail = state_.step, SET_FAILURE, str(exc)
                return False
            boxes.append(state_.hull)
            widths.append(width)
        record.hulls.append((state_.hull.lower.copy(), state_.hull.upper.copy()))
        if record.dumps is not None:
            record.dumps.append(serialization.to_dict(estimate))
        return True

    if keep(state):
        for k in range(run.steps):
            started = time.perf_counter()
            state = observer_step(config, state, sys, traj.inputs[k], traj.measurements[k + 1])
            record.step_ms.append(1e3 * (time.perf_counter() - started))
            if not keep(state):
                break

    record.results[None] = _seed_result(record, boxes, widths, run.steps, benchmark.n)
    if run.cutoff is not None:
        record.results[run.cutoff] = _seed_result(record, boxes, widths, run.cutoff, benchmark.n)
    status = f"diverged at step {record.diverged_step} ({record.reason})" if record.diverged_step is not None else "ok"
    log.info(f"{'✓' if record.diverged_step is None else '✗'} {run.benchmark} {method.value} seed {seed}: {status}")
    return record


def _run_cell_args(args) -> RunRecord:
    return run_cell(*args)


# ------------------------------------------------------------------ #
# OUTPUT                                                             #
# ------------------------------------------------------------------ #

def _atomic_write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
    return path


def _hull_csv(record: RunRecord, n: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "status"] + [f"lower{i + 1}" for i in range(n)] + [f"upper{i + 1}" for i in range(n)])
    for k, (lo, hi) in enumerate(record.hulls):
        writer.writerow([k, "ok"] + [repr(float(v)) for v in lo] + [repr(float(v)) for v in hi])
    if record.diverged_step is not None:
        writer.writerow([record.diverged_step, record.reason] + [""] * (2 * n))
    return buf.getvalue()


def _trajectory_csv(path: Path, traj: Trajectory) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    traj.to_csv(tmp)
    os.replace(tmp, path)
    return path


def _versions() -> Dict[str, str]:
    versions = {}
    for name in _VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def _check_fairness(records: List[RunRecord]) -> Dict[int, str]:
    digests: Dict[int, str] = {}
    for r in records:
        if digests.setdefault(r.seed, r.digest) != r.digest:
            raise EstimationError(f"seed {r.seed}: observers saw different measurement sequences")
    return digests


def _reports(run: RunConfig, records: List[RunRecord], horizon: Optional[int]) -> List[MetricReport]:
    by_method: Dict[str, List[SeedResult]] = {m.value: [] for m in run.methods}
    for r in records:
        by_method[r.method].append(r.results[horizon])
    categories = {m.value: METHOD_TABLE[m].category.value for m in run.methods}
    return metric_report(by_method, categories)


def run_comparison(run: RunConfig) -> RunOutcome:
    """Run every (method, seed) cell and write the comparison artifacts."""
    run.validate()
    out = Path(run.out)
    benchmark = run.load_benchmark()
    cells = [(run, m, s) for m in run.methods for s in run.seeds]
    log.info(f"{run.benchmark}: {len(run.methods)} method(s) × {len(run.seeds)} seed(s), {run.steps} steps, jobs={run.jobs}")

    if run.jobs > 1:
        with ProcessPoolExecutor(max_workers=run.jobs) as pool:
            records = list(pool.map(_run_cell_args, cells))
    else:
        records = [run_cell(*c) for c in cells]

    digests = _check_fairness(records)
    files: List[Path] = []
    for r in records:
        files.append(_atomic_write(out / "hulls" / f"{r.method}_seed{r.seed}.csv", _hull_csv(r, benchmark.n)))
        if r.dumps is not None:
            files.append(_atomic_write(out / "sets" / f"{r.method}_seed{r.seed}.json",
                                       json.dumps(r.dumps, sort_keys=True)))
    for seed in run.seeds:
        files.append(_trajectory_csv(out / "trajectories" / f"seed{seed}.csv",
                                     simulate_seed(benchmark, seed, run.steps)))

    reports = _reports(run, records, None)
    files.append(write_metric_csv(out / "summary.csv", reports, SUMMARY_COLUMNS))
    files.append(write_seed_csv(out / "seeds.csv", reports))
    cutoff_reports = None
    if run.cutoff is not None:
        cutoff_reports = _reports(run, records, run.cutoff)
        files.append(write_metric_csv(out / f"summary_k{run.cutoff}.csv", cutoff_reports, SUMMARY_COLUMNS))
        files.append(write_seed_csv(out / f"seeds_k{run.cutoff}.csv", cutoff_reports))

    timing = [write_metric_csv(out / "table.csv", reports, TABLE_COLUMNS),
              write_metric_csv(out / "timing.csv", reports, TIMING_COLUMNS)]
    if cutoff_reports is not None:
        timing.append(write_metric_csv(out / f"table_k{run.cutoff}.csv", cutoff_reports, TABLE_COLUMNS))

    directions = sample_directions(benchmark.n, run.direction_seed)
    manifest = {
        "format_version": FORMAT_VERSION,
        "benchmark": run.benchmark,
        "methods": [m.value for m in run.methods],
        "seeds": list(run.seeds),
        "steps": run.steps,
        "cutoff": run.cutoff,
        "direction_seed": run.direction_seed,
        "directions_sha256": hashlib.sha256(directions.tobytes()).hexdigest(),
        "measurements_sha256": {str(s): d for s, d in sorted(digests.items())},
        "budgets": {m.value: _budget_record(run, m, benchmark) for m in run.methods},
        "versions": _versions(),
        "deterministic_files": sorted(str(p.relative_to(out)) for p in files),
        "timing_files": sorted(str(p.relative_to(out)) for p in timing),
    }
    manifest_path = _atomic_write(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    files.append(manifest_path)

    diverged = [r.method for r in reports if r.diverged]
    log.info(f"{run.benchmark}: {len(reports) - len(diverged)}/{len(reports)} method(s) completed; results in {out}")
    return RunOutcome(out=out, reports=reports, cutoff_reports=cutoff_reports, files=files + timing)


def _budget_record(run: RunConfig, method: ObserverMethod, benchmark) -> Dict[str, object]:
    c = run.observer_config(method, benchmark)
    return {
        "max_order": c.max_order,
        "max_constraints": c.max_constraints,
        "partitions": c.partitions,
        "reduction": c.reduction,
        "inclusion": c.inclusion,
        "max_members": c.max_members,
    }
