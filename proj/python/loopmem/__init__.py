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

"""Polarization-qubit loop memory simulator."""

import json as _json

from ._loopmem import (
    LoopmemError,
    Scenario,
    SchemaError,
    budget,
    efficiency,
    fit_decay,
    fit_malus,
    loop_time_ns,
    preset_names,
    reconstruct,
    simulate,
    transmission_params,
)
from ._loopmem import run as _run

__all__ = [
    "LoopmemError",
    "Scenario",
    "SchemaError",
    "budget",
    "efficiency",
    "fit_decay",
    "fit_malus",
    "loop_time_ns",
    "preset_names",
    "reconstruct",
    "run",
    "simulate",
    "transmission_params",
]

__version__ = "0.1.0"


def run(scenario, subcommand, out_dir, target=""):
    """Run a CLI pipeline; returns (summary dict, list of written paths)."""
    summary, files = _run(scenario, subcommand, str(out_dir), target)
    return _json.loads(summary), files
