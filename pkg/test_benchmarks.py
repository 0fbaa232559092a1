"""
Benchmark Tests
================
Van der Pol and n-tank factories, their DC splits and redundant-state
augmentations, and benchmark id resolution.

Usage:
    pytest test_benchmarks.py
"""

import numpy as np
import pytest

from src.benchmarks import (
    load_benchmark,
    make_tank,
    make_vdp,
    parse_benchmark_id,
    tank_augment_redundant,
    tank_dc_split,
    vdp_augment_redundant,
    vdp_dc_split,
)
from src.benchmarks.registry import build_benchmark
from src.benchmarks.tank import INPUT_VALUE
from src.errors import ConfigError
from src.system.simulation import step_truth


# ------------------------------------------------------------------ #
# Van der Pol                                                        #
# ------------------------------------------------------------------ #

def test_vdp_step_small_mu():
    bench = make_vdp(0.1)
    assert np.allclose(step_truth(bench.system, [1.0, 0.0], None, np.zeros(2)), [1.0, -0.025])


def test_vdp_step_large_mu():
    bench = make_vdp(5.0)
    assert np.allclose(step_truth(bench.system, [0.0, 1.0], None, np.zeros(2)), [0.025, 1.125])


def test_vdp_scenario_constants():
    bench = make_vdp(0.1)
    assert bench.id == "vdp:0.1"
    assert np.allclose(bench.R0.lower, [-1, -1]) and np.allclose(bench.R0.upper, [1, 1])
    assert np.allclose(bench.system.W.upper, [0.001, 0.001])
    assert np.allclose(bench.system.V.upper, [0.2])
    assert bench.budgets.max_order == 30 and bench.budgets.max_constraints == 5
    assert bench.input_sequence(4).shape == (4, 0)


def test_vdp_rejects_nonpositive_mu():
    with pytest.raises(ConfigError):
        make_vdp(0.0)


@pytest.mark.parametrize("mu", [0.1, 5.0])
def test_vdp_dc_split_is_valid(mu):
    vdp_dc_split(mu).validate(make_vdp(mu).system.f)


def test_vdp_augmentation_commutes_with_the_lift():
    aug = vdp_augment_redundant(5.0)
    f = make_vdp(5.0).system.f
    rng = np.random.default_rng(0)
    for x in rng.uniform(-2.0, 2.0, size=(20, 2)):
        z = aug.lift_state(x)
        assert np.allclose(aug.constraint_matrix @ z, 0.0)
        assert np.allclose(aug.system.f.evaluate(z), aug.lift @ f.evaluate(x))


# ------------------------------------------------------------------ #
# Tanks                                                              #
# ------------------------------------------------------------------ #

def test_two_tank_step():
    bench = make_tank(2)
    x = step_truth(bench.system, [20.0, 20.0], np.zeros(bench.system.m), np.zeros(2))
    drop = 0.0075 * np.sqrt(392.4)
    assert x[0] == pytest.approx(20.0 - drop)
    assert x[0] == pytest.approx(19.8515, abs=1e-4)
    assert x[1] == pytest.approx(20.0)


def test_thirty_tank_layout():
    bench = make_tank(30)
    assert bench.system.C.shape == (21, 30)
    assert bench.system.m == 15
    assert bench.augmentation is None
    assert np.allclose(bench.input_value, INPUT_VALUE)


def test_thirty_tank_step_keeps_interior_levels():
    bench = make_tank(30)
    x = step_truth(bench.system, np.full(30, 20.0), np.zeros(bench.system.m), np.zeros(30))
    assert x[0] == pytest.approx(20.0 - 0.0075 * np.sqrt(392.4))
    assert np.allclose(x[1:], 20.0)


def test_six_tank_indices_are_filtered():
    bench = make_tank(6)
    assert bench.notes["inflow"] == [1, 4, 5]
    assert bench.notes["measured"] == [2, 4, 5]
    assert np.allclose(bench.R0.lower, 16.0) and np.allclose(bench.R0.upper, 24.0)


def test_tank_rejects_bad_indices():
    with pytest.raises(ConfigError):
        make_tank(4, measured=(5,))
    with pytest.raises(ConfigError):
        make_tank(1)


@pytest.mark.parametrize("n", [6, 30])
def test_tank_dc_split_is_valid(n):
    bench = make_tank(n)
    tank_dc_split(n).validate(bench.system.f, u=bench.input_value)


def test_six_tank_augmentation_commutes_with_the_lift():
    bench = make_tank(6)
    aug = bench.augmentation
    assert aug.system.n == 9 and aug.constraint_matrix.shape == (3, 9)
    rng = np.random.default_rng(1)
    u = bench.input_value
    for x in rng.uniform(5.0, 30.0, size=(20, 6)):
        z = aug.lift_state(x)
        assert np.allclose(aug.constraint_matrix @ z, 0.0)
        assert np.allclose(aug.system.f.evaluate(z, u), aug.lift @ bench.system.f.evaluate(x, u))


def test_thirty_tank_augmentation_is_refused():
    with pytest.raises(ConfigError):
        tank_augment_redundant(30)


# ------------------------------------------------------------------ #
# Registry                                                           #
# ------------------------------------------------------------------ #

def test_benchmark_ids_resolve_and_are_cached():
    assert parse_benchmark_id("tank:30") == ("tank", "30")
    assert load_benchmark("vdp:5") is load_benchmark("vdp:5")
    assert load_benchmark("tank:6").n == 6


def test_unknown_family_suggests_a_match():
    with pytest.raises(ConfigError, match="vdp"):
        parse_benchmark_id("vdq:0.1")


@pytest.mark.parametrize("text", ["vdp", "vdp:", "tank:six"])
def test_malformed_ids_are_config_errors(text):
    with pytest.raises(ConfigError):
        load_benchmark(text)


def test_index_overrides_apply_to_tanks_only():
    bench = build_benchmark("tank:6", inflow=(1,), measured=(2, 6))
    assert bench.system.C.shape == (2, 6)
    assert bench.system.m == 1
    with pytest.raises(ConfigError):
        build_benchmark("vdp:0.1", inflow=(1,))
