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

#include "loopmem/presets.hpp"

#include "loopmem/errors.hpp"

namespace loopmem {

namespace {

constexpr double kShortFiberM = 0.5;
constexpr double kLongFiberM = 50.0;
constexpr double kShortLoopNs = 36.5;
constexpr double kLongLoopNs = 526.0;

// Mirrors and PBSs lose about 7% in total, split over the two free-space
// zones.
constexpr double kFreeSpaceZoneT = 0.965;

std::vector<ComponentSpec> inventory(double fiber_m, double wavelength_nm,
                                     double pc_t, double circ_t, double rr_t,
                                     double connector_t, double coupler) {
  const double atten = fiber_attenuation_db_per_km(wavelength_nm);
  return {
      ComponentSpec::pbs("circ-optics", Zone::kCirculator, kFreeSpaceZoneT),
      ComponentSpec::circulator_arm("circ-arm", circ_t),
      ComponentSpec::pbs("sw-optics", Zone::kSwitch, kFreeSpaceZoneT),
      ComponentSpec::pockels_cell("pc", pc_t),
      ComponentSpec::fiber("dl-fiber", fiber_m, atten, connector_t),
      ComponentSpec::retroreflector("rr", rr_t),
      ComponentSpec::fpc("fpc"),
      ComponentSpec::coupler("k13", CouplingRoute::kC1ToC3, coupler),
      ComponentSpec::coupler("k12", CouplingRoute::kC1ToC2, coupler),
      ComponentSpec::coupler("k22", CouplingRoute::kC2ToC2, coupler),
      ComponentSpec::coupler("k23", CouplingRoute::kC2ToC3, coupler),
  };
}

void set_coupling(MemoryConfig &cfg, CouplingRoute route, double value) {
  for (ComponentSpec &c : cfg.components) {
    if (c.kind == ComponentKind::kCoupler && c.route == route) {
      c.transmission_h = c.transmission_v = value;
    }
  }
}

MemoryConfig calibrated(double fiber_m, double delta_tau,
                        const TransmissionParams &target) {
  MemoryConfig cfg;
  cfg.delta_tau_ns = delta_tau;
  cfg.components = as_built_inventory(fiber_m, 780.0);
  const TransmissionParams raw = derive_transmission_params(cfg);
  set_coupling(cfg, CouplingRoute::kC1ToC3, target.g13 / raw.g13);
  set_coupling(cfg, CouplingRoute::kC1ToC2, target.g12 / raw.g12);
  set_coupling(cfg, CouplingRoute::kC2ToC2, target.g22 / raw.g22);
  set_coupling(cfg, CouplingRoute::kC2ToC3, target.g23 / raw.g23);
  cfg.validate();
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-short", "paper-long", "paper-improved",
          "paper-improved-long"};
}

TransmissionParams measured_params(const std::string &name) {
  if (name == "paper-short") return {0.541, 0.419, 0.50, 0.662};
  if (name == "paper-long") return {0.541, 0.398, 0.44, 0.662};
  throw InvalidArgumentError("no measured transmissions for preset '" + name +
                             "'");
}

double loop_time_ns(double fiber_length_m) {
  const double per_m = (kLongLoopNs - kShortLoopNs) / (kLongFiberM - kShortFiberM);
  return kShortLoopNs + (fiber_length_m - kShortFiberM) * per_m;
}

std::vector<ComponentSpec> as_built_inventory(double fiber_length_m,
                                              double wavelength_nm) {
  return inventory(fiber_length_m, wavelength_nm, 0.90, 0.85, 0.81, 0.85, 1.0);
}

std::vector<ComponentSpec> improved_inventory(double fiber_length_m,
                                              double wavelength_nm) {
  return inventory(fiber_length_m, wavelength_nm, 0.99, 0.98, 0.98, 1.0, 0.95);
}

MemoryConfig preset_memory(const std::string &name) {
  if (name == "paper-short") {
    return calibrated(kShortFiberM, kShortLoopNs, measured_params(name));
  }
  if (name == "paper-long") {
    return calibrated(kLongFiberM, kLongLoopNs, measured_params(name));
  }
  if (name == "paper-improved" || name == "paper-improved-long") {
    const double fiber = name == "paper-improved" ? kShortFiberM : kLongFiberM;
    MemoryConfig cfg;
    cfg.delta_tau_ns = loop_time_ns(fiber);
    cfg.components = improved_inventory(fiber, 780.0);
    cfg.validate();
    return cfg;
  }
  throw InvalidArgumentError("unknown preset '" + name + "'");
}

}  // namespace loopmem
