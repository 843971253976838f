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

/**
 * @file scenario.hpp
 * @brief YAML scenario files.
 *
 * A scenario either starts from a named preset and overrides fields, or
 * spells out the memory completely:
 *
 *   preset: paper-short
 *   seed: 7
 *   memory:
 *     delta_tau_ns: 36.5
 *     x_dl_enabled: true
 *     component_overrides:
 *       pc: {rotation_error: 0.05}
 *   inputs: [H, D, R]
 *   n_cycles: 3
 *   n_range: [1, 8]
 *   source: {pair_rate: 600, acquisition_s: 60, noiseless: false}
 *   malus: {angles_deg: [0, 15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165]}
 *   tomography: {projectors: [H, V, D, R], mc_samples: 10000}
 *   budget: {wavelength_nm: 1550, fiber_length_m: 5000, n_max: 20}
 *
 * Without a preset, memory.delta_tau_ns and memory.components are
 * required. Unknown keys are rejected.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopmem/counting.hpp"
#include "loopmem/loop_engine.hpp"

namespace loopmem {

struct BudgetSettings {
  std::optional<double> wavelength_nm;  // rewrites fiber attenuation when set
  std::optional<double> fiber_length_m; // rewrites fiber length and loop time
  int n_max = 20;
};

struct Scenario {
  std::string preset;
  MemoryConfig memory;
  std::vector<std::string> inputs{"H", "D", "R"};
  int n_cycles = 3;
  int n_min = 1;
  int n_max = 8;
  SourceModel source;
  std::vector<double> malus_angles_rad;
  std::array<std::string, 4> tomo_projectors{"H", "V", "D", "R"};
  int mc_samples = 10000;
  BudgetSettings budget;
  std::optional<std::uint64_t> seed;
  std::string output_dir;

  /// Throws InvalidArgumentError / SchemaError on inconsistent content.
  void validate() const;

  /// Resolved content as JSON, excluding seed and output directory.
  std::string canonical_json() const;
  /// 16 hex digits of FNV-1a over canonical_json().
  std::string hash() const;

  /// Seed for sampled scans; throws InvalidArgumentError when absent.
  std::uint64_t require_seed() const;
};

/// Scenario with the preset's memory and default scan settings. The
/// source rate puts the mean N = 1 count at 1e4 per setting.
Scenario preset_scenario(const std::string &name);

/// Throws IoError when the file cannot be read, SchemaError on a schema
/// violation (field path and line).
Scenario load_scenario(const std::string &path);
Scenario parse_scenario(const std::string &yaml_text);

}  // namespace loopmem
