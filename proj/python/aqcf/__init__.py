# Copyright 2026 The aqcf Authors
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
"""Python front end for the aqcf C++ core.

JSON-returning core calls are decoded here so callers get plain dicts.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    NumericalError,
    ProfilingInconclusive,
    aqc_gate_count,
    apply_filter,
    energy,
    evaluate_filter,
    filter_gate_count,
    initial_state,
    lowest_energies,
    run_aqc,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "ProfilingInconclusive",
    "aqc_gate_count",
    "apply_filter",
    "design_phases",
    "energy",
    "estimate_energy",
    "evaluate_filter",
    "filter_gate_count",
    "hamiltonian",
    "initial_state",
    "lowest_energies",
    "run_aqc",
    "run_experiment",
]


def hamiltonian(kind, lx, ly=1):
    """Target Hamiltonian: {model, dimensions, boundary, terms, ...}."""
    return _json.loads(_core.hamiltonian_json(kind, lx, ly))


def design_phases(eta=4, mu=0.8, width=-1.0):
    """Phase table {eta, mu, width, phases, residual}."""
    return _json.loads(_core.design_phases(eta, mu, width))


def estimate_energy(state, kind, lx, ly, shots, seed, success_probability=1.0):
    return _json.loads(_core.estimate_energy(state, kind, lx, ly, shots, seed, success_probability))


def run_experiment(config):
    """Run an experiment from a config dict; returns the record dict."""
    return _json.loads(_core.run_experiment(_json.dumps(config)))
