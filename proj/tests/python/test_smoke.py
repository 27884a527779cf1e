import math
import os
from pathlib import Path

import pytest

import comomab

CONFIG_DIR = Path(os.environ.get("COMOMAB_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def test_dominance():
    assert comomab.super_dominates([2, 2], [1, 1])
    assert not comomab.super_dominates([2, 1], [1, 1])
    assert comomab.dominates([2, 1], [1, 1])
    assert comomab.incomparable([2, 1], [1, 2])
    with pytest.raises(comomab.DimensionError):
        comomab.dominates([1, 2], [1, 2, 3])


def test_fronts_and_gap():
    means = [[2, 1], [1, 2], [1, 1], [0.5, 0.5]]
    assert comomab.compute_spf(means) == [0, 1, 2]
    assert comomab.compute_pareto_front(means) == [0, 1]
    front = [[2, 1], [1, 2]]
    assert comomab.psg([0.5, 0.5], front) == pytest.approx(0.5)
    assert comomab.psg_oracle([0.5, 0.5], front) == pytest.approx(0.5, abs=1e-9)


def test_bounds():
    value = comomab.theorem1_bound(math.e, 1, 1, 1, 1.0, 1.0, 1.0)
    assert value == pytest.approx(9 + math.pi**2 / 3)
    assert comomab.hoeffding_violation_bound(8, 0.5, 2) == pytest.approx(2 * math.exp(-4))


def test_lambert_and_outage():
    w = comomab.lambert_w(2.1)
    assert w * math.exp(w) == pytest.approx(2.1, abs=1e-12)
    assert comomab.outage_probability(0.14, 0.0, 1.0) == 0.0


def test_channel_instance():
    info = comomab.paper6_environment()
    assert info["actions"] == 108
    assert len(info["spf"]) == 9
    assert info["spf"] == info["pareto_front"]


def test_run_config_is_deterministic():
    cfg = CONFIG_DIR / "routing.cfg"
    a = comomab.run_config(cfg, horizon=500, runs=2, workers=1)
    b = comomab.run_config(cfg, horizon=500, runs=2, workers=2)
    assert set(a) == {"como_ucb", "pareto_ucb1", "llr", "so_ucb1"}
    assert a == b
    assert a["como_ucb"]["checkpoints"][-1] == 500


def test_bad_config_raises(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[experiment]\nhorizon = 10\n")
    with pytest.raises(comomab.ConfigurationError):
        comomab.run_config(bad)
