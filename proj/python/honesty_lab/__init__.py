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

"""Honesty diagnostics for perturbed substochastic semigroups on l1."""

import json

from ._core import (
    Model,
    SchemaError,
    load_model,
    mass_loss,
    parse_model,
    resolvent,
    semigroup,
    simulate,
    xi,
    xi_dual,
    zoo_model,
    zoo_names,
)

__version__ = "0.1.0"


def verdict(model, u=None, lam=1.0, tol=1e-7, delta_times=()):
    """Run the honesty verdict and return the report as a dict."""
    from ._core import verdict_report

    if isinstance(model, str):
        model = zoo_model(model)
    return json.loads(verdict_report(model, u or {0: 1.0}, lam, tol, list(delta_times)))


__all__ = [
    "Model",
    "SchemaError",
    "load_model",
    "mass_loss",
    "parse_model",
    "resolvent",
    "semigroup",
    "simulate",
    "verdict",
    "xi",
    "xi_dual",
    "zoo_model",
    "zoo_names",
]
