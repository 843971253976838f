// Copyright 2026 The loopmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "loopmem/fitting.hpp"
#include "loopmem/scenario.hpp"

namespace loopmem {

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::string summary_json;  // contents of the command's summary file
};

/// Subcommands: simulate, decay, malus, tomo, budget, reproduce. The
/// reproduce target is one of fig2c, fig3, fig4. Every CSV row and JSON
/// summary carries the scenario hash and seed; the only non-deterministic
/// output is the timestamp in run_meta.json. Files are written through a
/// temporary and renamed into place.
RunReport run(const Scenario &scenario, const std::string &subcommand,
              const std::string &target, const std::filesystem::path &out_dir);

/// Budget inventory of a scenario after the budget fiber/wavelength
/// overrides; also returns the loop time to use.
std::vector<ComponentSpec> budget_inventory(const Scenario &scenario,
                                            double *delta_tau_ns,
                                            double *wavelength_nm);

}  // namespace loopmem
