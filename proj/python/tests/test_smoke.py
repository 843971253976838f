# Copyright 2026 The loopmem Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import loopmem


def test_presets():
    assert set(loopmem.preset_names()) >= {"paper-short", "paper-long", "paper-improved"}
    s = loopmem.Scenario.from_preset("paper-short")
    assert s.delta_tau_ns == 36.5
    p = loopmem.transmission_params(s)
    assert p["g13"] == pytest.approx(0.541, abs=1e-12)
    assert loopmem.efficiency(p, 3) == pytest.approx(0.419 * 0.25 * 0.662, abs=1e-12)


def test_simulate_short_line():
    s = loopmem.Scenario.from_preset("paper-short")
    out = loopmem.simulate(s, "D", 3)
    assert out["retrieved_weight"] == pytest.approx(0.0694, abs=1e-4)
    assert out["fidelity"] == pytest.approx(1.0, abs=1e-9)
    rho = out["rho"]
    assert rho.shape == (2, 2)
    assert np.trace(rho).real == pytest.approx(1.0)


def test_component_override_costs_weight():
    s = loopmem.Scenario.from_preset("paper-short")
    w0 = loopmem.simulate(s, "H", 3)["retrieved_weight"]
    s.set_component("pc", "rotation_error", 0.1)
    out = loopmem.simulate(s, "H", 3)
    assert out["retrieved_weight"] < w0
    assert out["fidelity"] == pytest.approx(1.0, abs=1e-9)


def test_fits():
    angles = [i * math.pi / 12 for i in range(12)]
    counts = [1e4 * math.cos(a) ** 2 for a in angles]
    assert loopmem.fit_malus(angles, counts)["visibility"] == pytest.approx(1.0, abs=1e-9)
    n = list(range(1, 9))
    decay = [5e4 * 0.49 ** (k - 1) for k in n]
    assert loopmem.fit_decay(n, decay)["gamma_per_cycle"] == pytest.approx(0.49, abs=1e-12)


def test_reconstruct_right_circular():
    r = loopmem.reconstruct([50.0, 50.0, 50.0, 100.0], target="R", mc_samples=200, seed=3)
    assert r["fidelity"] > 0.9999
    assert r["purity"] == pytest.approx(1.0, abs=1e-3)
    assert r["n_samples"] == 200


def test_budget():
    b = loopmem.budget()
    assert 0.88 <= b["per_cycle"] <= 0.92
    assert loopmem.loop_time_ns(5000.0) == pytest.approx(5e4, rel=0.02)


def test_schema_error_carries_field():
    with pytest.raises(loopmem.SchemaError) as info:
        loopmem.Scenario.from_yaml("seed: 1\nmemory:\n  components: []\n")
    assert info.value.field == "memory.delta_tau_ns"
    assert info.value.line == 3
    assert isinstance(info.value, loopmem.LoopmemError)


def test_library_error_is_mapped():
    s = loopmem.Scenario.from_preset("paper-short")
    with pytest.raises(loopmem.LoopmemError):
        s.set_component("pc", "transmission", 1.5)


def test_run_pipeline(tmp_path):
    s = loopmem.Scenario.from_preset("paper-short")
    summary, files = loopmem.run(s, "reproduce", tmp_path, "fig2c")
    assert summary["eta_pass_through"] == pytest.approx(0.541)
    assert summary["scenario_hash"] == s.hash()
    assert any(f.endswith("fig2c.csv") for f in files)
