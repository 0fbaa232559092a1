"""
Harness Tests
==============
Run-config parsing, the comparison runner (output files, byte-identical
reruns, cutoff tables) and the command line.

Usage:
    pytest test_harness.py
"""

import csv
import json
import math
from dataclasses import replace
from pathlib import Path

import pytest

from src.errors import ConfigError, SetError
from src.harness import RunConfig, cli, load_run_config, parse_run_config, run_cell, run_comparison
from src.observers import ObserverMethod, dispatcher

QUICK = """
[run]
benchmark = vdp:0.1
methods   = FRad-A, CZN-B, pDTDI
seeds     = 0,1
steps     = 6
cutoff    = 3
"""


def quick_run(out: Path, **changes) -> RunConfig:
    run = parse_run_config(QUICK, "quick.ini").with_cli(out=out)
    return replace(run, **changes) if changes else run


# ------------------------------------------------------------------ #
# Config                                                             #
# ------------------------------------------------------------------ #

def test_defaults():
    run = parse_run_config("[run]\nbenchmark = vdp:5\n")
    assert run.methods == tuple(ObserverMethod)
    assert run.seeds == (0, 1, 2, 3, 4)
    assert run.steps == 100 and run.cutoff is None
    assert run.jobs >= 1 and not run.dump_sets


@pytest.mark.parametrize("text, seeds", [("3", (0, 1, 2)), ("3,7,11", (3, 7, 11)), (" 5, 2 ", (5, 2))])
def test_seeds_are_a_count_or_a_list(text, seeds):
    assert parse_run_config(f"[run]\nbenchmark = vdp:5\nseeds = {text}\n").seeds == seeds


def test_overrides_merge_shared_and_per_method():
    run = parse_run_config(
        "[run]\nbenchmark = vdp:0.1\nmethods = pDTDI, FRad-A\n"
        "[observers]\nreduction = girard\n"
        "[observer.pdtdi]\npartitions = 3\n"
    )
    assert run.overrides[ObserverMethod.PDTDI] == {"reduction": "girard", "partitions": 3}
    assert run.overrides[ObserverMethod.FRAD_A] == {"reduction": "girard"}
    config = run.observer_config(ObserverMethod.PDTDI)
    assert config.partitions == 3 and config.reduction == "girard"
    assert config.augmentation is not None


def test_tank_indices():
    run = parse_run_config("[run]\nbenchmark = tank:6\ninflow = 1\nmeasured = 2, 6\n").validate()
    bench = run.load_benchmark()
    assert bench.system.C.shape == (2, 6) and bench.system.m == 1


@pytest.mark.parametrize("text, match", [
    ("[run]\nbenchmark = vdp:0.1\nstep = 5\n", "steps"),
    ("[run]\nbenchmark = vdp:0.1\n[observer]\nmax_order = 3\n", "observer"),
    ("[run]\nbenchmark = vdp:0.1\n[observers]\nmax_ordr = 3\n", "max_order"),
    ("[run]\nbenchmark = vdp:0.1\nmethods = CZN-C\n", "CZN"),
    ("[run]\nbenchmark = vdp:0.1\nsteps = many\n", "steps"),
    ("[run]\nbenchmark = vdp:0.1\nseeds = 0\n", "seed"),
    ("[run]\nsteps = 5\n", "benchmark"),
    ("[runs]\nbenchmark = vdp:0.1\n", "run"),
])
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_run_config(text)


@pytest.mark.parametrize("text, match", [
    ("[run]\nbenchmark = vdp:0.1\nsteps = 10\ncutoff = 20\n", "cutoff"),
    ("[run]\nbenchmark = vdp:0.1\nseeds = 1,1\n", "duplicate"),
    ("[run]\nbenchmark = vdp:0.1\nmethods = pDTDI\n[observer.pDTDI]\npartitions = 0\n", "partitions"),
    ("[run]\nbenchmark = vdq:0.1\n", "vdp"),
    ("[run]\nbenchmark = vdp:0.1\ninflow = 1\n", "inflow|tank"),
])
def test_validation_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_run_config(text, "bad.ini").validate()


def test_command_line_flags_win(tmp_path):
    run = parse_run_config(QUICK).with_cli(out=tmp_path, seeds="4", cutoff=2, jobs=3)
    assert run.out == tmp_path and run.seeds == (0, 1, 2, 3)
    assert run.cutoff == 2 and run.jobs == 3


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(tmp_path / "nope.ini")


# ------------------------------------------------------------------ #
# Runner                                                             #
# ------------------------------------------------------------------ #

def test_cell_keeps_one_hull_per_step(tmp_path):
    record = run_cell(quick_run(tmp_path), ObserverMethod.FRAD_A, 0)
    assert record.diverged_step is None
    assert len(record.hulls) == 7 and len(record.step_ms) == 6
    full, cut = record.results[None], record.results[3]
    assert full.completed_steps == 6 and cut.completed_steps == 3
    assert math.isfinite(full.v_tilde) and math.isfinite(cut.w_tilde)


def test_comparison_writes_all_artifacts(tmp_path):
    outcome = run_comparison(quick_run(tmp_path / "a"))
    out = outcome.out
    for name in ("summary.csv", "seeds.csv", "summary_k3.csv", "seeds_k3.csv", "table.csv", "timing.csv",
                 "table_k3.csv", "manifest.json", "trajectories/seed0.csv", "hulls/pDTDI_seed1.csv"):
        assert (out / name).is_file(), name
    assert not (out / "sets").exists()
    assert not outcome.all_diverged

    rows = list(csv.DictReader((out / "summary.csv").open(encoding="utf-8")))
    assert [r["method"] for r in rows] == ["FRad-A", "CZN-B", "pDTDI"]
    assert min(float(r["v_hat"]) for r in rows) == pytest.approx(1.0)
    assert {r["category"] for r in rows} == {"intersection", "interval"}

    hull_rows = list(csv.reader((out / "hulls" / "CZN-B_seed0.csv").open(encoding="utf-8")))
    assert hull_rows[0] == ["step", "status", "lower1", "lower2", "upper1", "upper2"]
    assert len(hull_rows) == 8

    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["seeds"] == [0, 1] and manifest["cutoff"] == 3
    assert set(manifest["measurements_sha256"]) == {"0", "1"}
    assert manifest["budgets"]["pDTDI"]["partitions"] == 5
    assert "timing.csv" in manifest["timing_files"]
    assert "summary.csv" in manifest["deterministic_files"]


def test_reruns_are_byte_identical(tmp_path):
    first = run_comparison(quick_run(tmp_path / "a", dump_sets=True))
    second = run_comparison(quick_run(tmp_path / "b", dump_sets=True))
    manifest = json.loads((first.out / "manifest.json").read_text(encoding="utf-8"))
    assert any(name.startswith("sets/") for name in manifest["deterministic_files"])
    for name in manifest["deterministic_files"] + ["manifest.json"]:
        assert (first.out / name).read_bytes() == (second.out / name).read_bytes(), name


def test_worker_processes_give_the_same_summary(tmp_path):
    serial = run_comparison(quick_run(tmp_path / "serial", jobs=1))
    pooled = run_comparison(quick_run(tmp_path / "pooled", jobs=2))
    assert (serial.out / "summary.csv").read_bytes() == (pooled.out / "summary.csv").read_bytes()


def test_divergence_is_recorded(tmp_path, monkeypatch):
    monkeypatch.setattr("src.observers.dispatcher.STEP_TIMEOUT_S", -1.0)
    outcome = run_comparison(quick_run(tmp_path, methods=(ObserverMethod.FRAD_A,), seeds=(0,), jobs=1))
    assert outcome.all_diverged
    report = outcome.reports[0]
    assert math.isinf(report.v_tilde) and math.isinf(report.v_hat)
    rows = list(csv.reader((outcome.out / "hulls" / "FRad-A_seed0.csv").open(encoding="utf-8")))
    assert rows[-1][:2] == ["0", "step timeout"]


def _failing_hull_after(calls: int):
    real = dispatcher.interval_hull
    seen = {"n": 0}

    def hull(X):
        seen["n"] += 1
        if seen["n"] > calls:
            raise SetError("LP solver failed: (HiGHS Status 4: Solve error)")
        return real(X)

    return hull


def test_cell_survives_a_hull_solver_failure(tmp_path, monkeypatch):
    monkeypatch.setattr("src.observers.dispatcher.interval_hull", _failing_hull_after(3))
    record = run_cell(quick_run(tmp_path, methods=(ObserverMethod.CZN_B,), seeds=(0,), jobs=1),
                      ObserverMethod.CZN_B, 0)
    assert record.diverged_step == 3 and record.reason == "set operation failed"
    assert len(record.hulls) == 3
    assert record.results[None].diverged and math.isinf(record.results[None].v_tilde)
    assert record.results[3].diverged


def test_cell_survives_a_width_solver_failure(tmp_path, monkeypatch):
    def broken(R, directions):
        raise SetError("LP solver failed: (HiGHS Status 4: Solve error)")

    monkeypatch.setattr("src.harness.runner.mean_width", broken)
    record = run_cell(quick_run(tmp_path, jobs=1), ObserverMethod.FRAD_A, 0)
    assert record.diverged_step == 1 and record.reason == "set operation failed"
    assert len(record.hulls) == 1


def test_comparison_still_writes_tables_when_every_solve_fails(tmp_path, monkeypatch):
    monkeypatch.setattr("src.observers.dispatcher.interval_hull", _failing_hull_after(0))
    outcome = run_comparison(quick_run(tmp_path, jobs=1))
    assert outcome.all_diverged
    rows = list(csv.DictReader((outcome.out / "summary.csv").open(encoding="utf-8")))
    assert [r["v_hat"] for r in rows] == ["inf", "inf", "inf"]
    hull_rows = list(csv.reader((outcome.out / "hulls" / "CZN-B_seed1.csv").open(encoding="utf-8")))
    assert hull_rows[-1][:2] == ["0", "set operation failed"]


# ------------------------------------------------------------------ #
# Command line                                                       #
# ------------------------------------------------------------------ #

def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "run.ini"
    path.write_text(text, encoding="utf-8")
    return path


def test_cli_list_methods(capsys):
    assert cli(["list-methods"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 14 and lines[0].startswith("ESO-E")


def test_cli_validate(tmp_path, capsys):
    assert cli(["validate", str(_write(tmp_path, QUICK))]) == 0
    assert "vdp:0.1" in capsys.readouterr().out


def test_cli_validate_rejects_bad_budget(tmp_path, capsys):
    path = _write(tmp_path, "[run]\nbenchmark = vdp:0.1\nmethods = pDTDI\n[observer.pDTDI]\npartitions = 0\n")
    assert cli(["validate", str(path)]) == 2
    assert "partitions" in capsys.readouterr().err


def test_cli_run(tmp_path):
    path = _write(tmp_path, QUICK)
    assert cli(["run", str(path), "--out", str(tmp_path / "out"), "--seeds", "1"]) == 0
    assert (tmp_path / "out" / "summary.csv").is_file()
    assert not (tmp_path / "out" / "hulls" / "FRad-A_seed1.csv").exists()


def test_cli_oracle(tmp_path):
    out = tmp_path / "cloud.csv"
    assert cli(["oracle", "vdp:0.1", "--steps", "2", "--grid", "0.05", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open(encoding="utf-8")))
    assert rows[0] == ["x1", "x2", "truth"]
    assert rows[1][2] == "1" and len(rows) > 2


def test_cli_oracle_refuses_high_dimension(tmp_path):
    assert cli(["oracle", "tank:6", "--out", str(tmp_path / "cloud.csv")]) == 2
