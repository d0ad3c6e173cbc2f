import math

import numpy as np
import pytest

import fklab


def test_constants_d1_alpha2():
    c = fklab.constants(1, 2.0)
    assert c["a1"] == pytest.approx(2 * math.sqrt(math.pi), rel=1e-12)
    assert c["C"] == pytest.approx(2.6586807764, rel=1e-9)
    assert c["a2"] == pytest.approx(math.sqrt(c["C"] / 2), rel=1e-12)


def test_invalid_regime_raises():
    with pytest.raises(ValueError):
        fklab.constants(1, 1.0)


def test_log_mgf_asymptotics():
    s = 1e4
    c = fklab.constants(1, 2.0)
    assert fklab.log_mgf(s) == pytest.approx(-c["a1"] * math.sqrt(s), abs=1e-6)


def test_log_laplace_dirac_matches_mgf():
    t = 50.0
    assert fklab.log_laplace([0.0], [1.0], t) == pytest.approx(fklab.log_mgf(t), rel=1e-8)


def test_ground_state_harmonic():
    C = fklab.constants(1, 2.0)["C"]
    L, n = 5.0, 999
    x = np.linspace(-L, L, n + 2)[1:-1]
    l1, l2, phi = fklab.ground_state(list(C * x**2), L)
    assert l1 == pytest.approx(math.sqrt(C / 2), rel=1e-4)
    assert l2 - l1 == pytest.approx(math.sqrt(2 * C), rel=1e-4)
    assert min(phi) >= -1e-12


def test_run_scenario_roundtrip(tmp_path):
    rec = fklab.run_scenario("constants", out_dir=str(tmp_path), seed=3)
    assert rec["scenario"] == "constants"
    assert all(v["pass"] for v in rec["verdicts"])
    assert (tmp_path / "record.json").exists()
    assert fklab.run_scenario("mgf", seed=3) == fklab.run_scenario("mgf", seed=3)


def test_run_scenario_bad_key():
    with pytest.raises(fklab.ConfigError):
        fklab.run_scenario("constants", colour="red")
    assert "all" in fklab.scenarios()
