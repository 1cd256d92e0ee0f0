import math
import os

import pytest

import decolight as dl

CONFIG = os.environ.get("DECOLIGHT_CONFIG", os.path.join(os.path.dirname(__file__), "..", "..", "configs", "default.ini"))


def test_kernel_limits():
    scales = dl.PhysicalScales(1.0, 1.0)
    assert dl.dipole_kernel([0.0, 0.0, 0.0], dl.DipoleOrientation([0.3, 0.1, 1.0]), scales) == pytest.approx(2 / 3, abs=1e-15)
    j = dl.dipole_kernel([math.pi, 0.0, 0.0], dl.DipoleOrientation([0.0, 0.0, 1.0]), scales)
    assert j == pytest.approx(-1 / math.pi**2, abs=1e-12)


def test_gauss_hermite():
    nodes, weights = dl.gauss_hermite_rule(10)
    assert sum(weights) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert sum(w * x**2 for x, w in zip(nodes, weights)) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


def test_config_round_trip():
    cfg = dl.load_config(CONFIG)
    assert dl.parse_config(dl.emit_config(cfg)) == cfg
    changed = dl.apply_override(cfg, "condensate.width=50")
    assert changed != cfg
    with pytest.raises(ValueError):
        dl.apply_override(cfg, "condensate.width=-1")


def test_standing_wave_overlap_is_one():
    scenario = dl.Scenario(
        dl.PhysicalScales(1.0, 1.0),
        dl.LaserField.standing_wave(1.0, 1.0, 1.1),
        dl.CondensateMode(3.0, 2.0),
    )
    r = dl.condensate_amplitude([0.0, 0.0, 0.5], 0.7, scenario)
    assert abs(r.overlap - 1) < 1e-12


def test_profile_symmetry():
    scenario = dl.Scenario(
        dl.PhysicalScales(1.0, 1.0),
        dl.LaserField.running_wave(3.0, 150.0, 1.0),
        dl.CondensateMode(20.0, 100.0),
    )
    p, m = dl.ab_profile(15.0, scenario), dl.ab_profile(-15.0, scenario)
    assert p.A == pytest.approx(-m.A, rel=1e-9)
    assert p.B == pytest.approx(m.B, rel=1e-9)
    assert p.B > 0


def test_run_command_kernel_and_oracle():
    cfg = dl.apply_override(dl.load_config(CONFIG), "kernel.u_samples=3")
    code, out, _ = dl.run_command("kernel", cfg)
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows[0] == "u[k0*r],theta[rad],J"
    code, out, _ = dl.run_command("oracle", dl.load_config(CONFIG))
    assert code == 0 and "all checks passed" in out
