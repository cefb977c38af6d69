# Copyright 2026 The meanking Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import meanking as mk


def test_thresholds():
    assert mk.projection_game_threshold() == pytest.approx((2 + 2 ** -0.5) / 3, abs=1e-15)
    assert mk.second_challenge_threshold() == pytest.approx(5 / 6, abs=1e-15)


def test_vaa_basis_is_orthonormal():
    for variant in ("first", "second"):
        basis = mk.vaa_basis(variant)
        assert len(basis) == 4
        for i, (_, a) in enumerate(basis):
            for j, (_, b) in enumerate(basis):
                ip = sum(x.conjugate() * y for x, y in zip(a, b))
                assert abs(ip - (1 if i == j else 0)) < 1e-12


def test_every_projection_passes_half():
    for label in mk.PROJECTION_LABELS:
        p, post = mk.project(mk.init_state(), label)
        assert p == pytest.approx(0.5, abs=1e-12)
        assert len(post) == 4


def test_retrodiction_and_inference():
    probs = dict(mk.measure_in_basis(mk.projected_state("h"), "first"))
    for outcome, p in probs.items():
        if p > 1e-12:
            assert mk.alice_answer(outcome, "Z") == "h"
    for u in mk.UNITARY_LABELS:
        pair = {"x": "XY", "y": "YZ", "z": "ZX"}[u[0]]
        for outcome, p in mk.measure_in_basis(mk.challenge_post_state(u), "second"):
            if p > 1e-12:
                assert mk.challenge_infer(outcome, pair, "second") == u


def test_explicit_strategy_and_search():
    assert mk.evaluate("projection", math.pi / 2, math.pi / 2, math.pi / 4, 0.0) == pytest.approx(
        mk.projection_game_threshold(), abs=1e-12)
    r = mk.search_optimum("second-challenge", 64, 1)
    assert set(r) == {"game", "resolution", "optimum", "argmax_angles", "runtime_ms"}
    assert r["optimum"] == pytest.approx(5 / 6, abs=1e-6)


def test_ideal_optics():
    d = mk.ideal_distribution("projection", "r", "second")
    assert sum(d["clicks"]) == pytest.approx(0.25, abs=1e-12)
    assert len(mk.detector_outcomes("first")) == 4


def test_simulate_demo_beats_threshold():
    plan = {"game": "projection", "trials_per_setting": 2000, "seed": 3,
            "imperfections": mk.demonstration_config()}
    table, report, csv = mk.simulate(plan, 1)
    assert report["all_pass"]
    assert table["total_runs"] == 12000
    assert csv.startswith("bob_choice,D0,D1,D2,D3")
    assert mk.simulate(plan, 3)[2] == csv


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        mk.projected_state("diagonal")
    with pytest.raises(ValueError):
        mk.simulate({"trials_per_setting": 0})


def test_verify():
    checks = mk.verify()
    assert checks and all(ok for _, ok, _ in checks), [c for c in checks if not c[1]]
