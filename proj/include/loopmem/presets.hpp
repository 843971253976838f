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

#include <string>
#include <vector>

#include "loopmem/loop_engine.hpp"
#include "loopmem/optics.hpp"

namespace loopmem {

/// Built-in memory configurations:
///   paper-short      0.5 m delay fiber, 36.5 ns loop, measured segment
///                    transmissions 0.541 / 0.419 / 0.50 / 0.662
///   paper-long       50 m delay fiber, 526 ns loop, 0.541 / 0.398 / 0.44 /
///                    0.662
///   paper-improved   short line with the upgraded inventory
///   paper-improved-long
/// The measured presets keep the as-built component losses and calibrate
/// the four coupler efficiencies so the derived segment transmissions hit
/// the measured values exactly.
std::vector<std::string> preset_names();
MemoryConfig preset_memory(const std::string &name);

/// Measured segment transmissions of the paper-short / paper-long presets.
TransmissionParams measured_params(const std::string &name);

/// Upgraded inventory: 1% Pockels cell loss, 2% retroreflector and
/// circulator loss, spliced connections, 95% couplers. Fiber attenuation
/// follows the wavelength.
std::vector<ComponentSpec> improved_inventory(double fiber_length_m,
                                              double wavelength_nm);

/// As-built inventory with the given delay fiber and unit couplers.
std::vector<ComponentSpec> as_built_inventory(double fiber_length_m,
                                              double wavelength_nm);

/// Loop time of a retroreflected fiber line: out and back at the group
/// index of silica plus the fixed free-space overhead of the short line.
double loop_time_ns(double fiber_length_m);

}  // namespace loopmem
