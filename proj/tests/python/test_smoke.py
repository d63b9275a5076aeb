# Copyright 2026 The honesty-lab Authors
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

import honesty_lab as hl


def test_zoo_names_load():
    for name in hl.zoo_names():
        assert hl.zoo_model(name).name == name


def test_quadratic_birth_is_dishonest():
    rep = hl.verdict("quadratic_birth")
    assert rep["verdict"] == "Dishonest"
    lo, hi = rep["xi"]["lo"], rep["xi"]["hi"]
    assert lo <= 0.2720290 + 1e-6 and hi >= 0.2720290 - 1e-6


def test_decay_resolvent_and_semigroup():
    m = hl.zoo_model("decay")
    x, (lo, hi), ok = hl.resolvent(m, 1.0, {0: 1.0})
    assert ok and x[0] == pytest.approx(0.5, abs=1e-12)
    v, mass, _ = hl.semigroup(m, 1.0, {0: 1.0})
    assert v[0] == pytest.approx(math.exp(-1.0), abs=1e-9)


def test_two_state_mass_loss_routes_agree():
    m = hl.zoo_model("two_state")
    for t, (alo, ahi), (hlo, hhi) in hl.mass_loss(m, [0.5, 1.0], {0: 1.0}):
        assert abs((alo + ahi) / 2 - (hlo + hhi) / 2) <= 1e-8


def test_simulate_is_deterministic():
    m = hl.zoo_model("killed_birth_death")
    a = hl.simulate(m, {0: 1.0}, 1.0, 2000, 7)
    b = hl.simulate(m, {0: 1.0}, 1.0, 2000, 7)
    assert a == b
    total = a["survival"][0] + a["exploded"][0] + a["killed"][0]
    assert total == pytest.approx(1.0, abs=1e-15)


def test_bad_model_raises():
    with pytest.raises(hl.SchemaError):
        hl.parse_model('{"name": "x"}')
