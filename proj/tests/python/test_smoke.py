import json
import math

import pytest

import dtc


def test_version():
    assert dtc.__version__ == "0.1.0"


def test_energy_is_continuous_at_the_transition():
    p = dtc.ModelParams.from_g(0.5, 20.0, 0.1, 5, 4.5)
    below, _ = dtc.ground_energy(p, 1.0 - 2e-8, dtc.EnergyBranch.approximate)
    above, _ = dtc.ground_energy(p, 1.0 + 2e-8, dtc.EnergyBranch.approximate)
    assert abs(below - above) < 1e-12
    _, d2 = dtc.ground_energy(p, 0.8)
    assert abs(dtc.ground_energy_d2_fd(p, 0.8) - d2) < 1e-8 * max(1.0, abs(d2))


def test_inverted_variance_matches_closed_form_at_revival():
    a, G, xi = 0.05, 0.1, 3j
    t = dtc.revival_time(a, G)
    closed = dtc.inverted_variance_closed_form(a, G, xi)
    assert dtc.inverted_variance(a, G, xi, t) == pytest.approx(closed, rel=1e-8)
    assert dtc.inverted_variance(a, G, xi, t) <= dtc.qfi(a, G, xi, t) * (1 + 1e-9)


def test_metric_is_positive():
    m = dtc.metric_components(dtc.ModelParams.from_g(0.9, 20.0, 0.1, 5, 4.5))
    assert m.g_ll > 0 and m.g_OO > 0
    assert m.g_ll * m.g_OO - m.g_lO**2 >= -1e-12 * m.g_ll * m.g_OO


def test_config_round_trip_and_run():
    cfg = {
        "name": "smoke",
        "runs": [
            {
                "name": "energy",
                "experiment": "ground_energy",
                "panels": [{"label": "N5", "N": 5, "K": 4.5}],
                "sweep": {"axis": "g", "min": 0.5, "max": 1.5, "points": 5},
            }
        ],
    }
    canonical = dtc.parse_config(json.dumps(cfg))
    assert dtc.parse_config(canonical) == canonical
    (run,) = dtc.run_config(canonical, threads=1)
    assert run["experiment"] == "ground_energy"
    assert len(run["columns"]["E_G"]) == 5
    assert all(math.isfinite(e) for e in run["columns"]["E_G"])


def test_unknown_key_is_rejected():
    with pytest.raises(dtc.ConfigError):
        dtc.parse_config(json.dumps({"name": "x", "runs": [], "bogus": 1}))
