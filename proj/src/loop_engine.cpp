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

#include "loopmem/loop_engine.hpp"

#include <cmath>

#include "loopmem/errors.hpp"

namespace loopmem {

namespace {

constexpr double kNegligibleWeight = 1e-15;

double product_of_transmissions(std::span<const ComponentSpec> specs) {
  double t = 1.0;
  for (const ComponentSpec &c : specs) t *= c.mean_transmission();
  return t;
}

// Scalar passive loss of a free-space zone (everything except the active
// or routing element).
double zone_optics_transmission(const MemoryConfig &cfg, Zone z) {
  double t = 1.0;
  for (const ComponentSpec &c : cfg.components) {
    if (c.zone != z) continue;
    if (c.kind == ComponentKind::kPbs || c.kind == ComponentKind::kMirror) {
      t *= c.mean_transmission();
    }
  }
  return t;
}

void require_finite_positive(double v, const char *name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw InvalidArgumentError(std::string(name) + " must be > 0");
  }
}

void require_finite_nonneg(double v, const char *name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw InvalidArgumentError(std::string(name) + " must be >= 0");
  }
}

// Amplitude bookkeeping for a single run. Every loss is attributed either
// to the absorbed pool or to a timed ejection event so that the outcome's
// weight balance is an independent check.
class Propagator {
 public:
  explicit Propagator(StorageOutcome &out) : out_(out) {}

  DensityMatrix absorb(const DensityMatrix &rho, const JonesOperator &k) {
    DensityMatrix next = apply(rho, k);
    out_.absorbed_weight += rho.trace() - next.trace();
    return next;
  }

  DensityMatrix absorb(const DensityMatrix &rho, double t) {
    return absorb(rho, jones::identity().attenuated(t));
  }

  DensityMatrix eject(const DensityMatrix &rho, const JonesOperator &k,
                      double time_ns, const char *port) {
    DensityMatrix next = apply(rho, k);
    const double lost = rho.trace() - next.trace();
    if (lost != 0.0) out_.ejections.push_back({time_ns, lost, port});
    return next;
  }

  // Returns (cross, back) and books the Pockels-cell absorption.
  std::pair<DensityMatrix, DensityMatrix> sagnac(const DensityMatrix &rho,
                                                 const JonesOperator &pc) {
    const SagnacSplit split = sagnac_split(pc);
    DensityMatrix cross = apply(rho, split.cross);
    DensityMatrix back = apply(rho, split.back);
    out_.absorbed_weight += rho.trace() - cross.trace() - back.trace();
    return {cross, back};
  }

 private:
  StorageOutcome &out_;
};

}  // namespace

void MemoryConfig::validate() const {
  require_finite_positive(delta_tau_ns, "delta_tau_ns");
  require_finite_nonneg(pass_through_ns, "pass_through_ns");
  require_finite_nonneg(switch_offset_ns, "switch_offset_ns");
  require_finite_nonneg(herald_latency_ns, "herald_latency_ns");
  require_finite_nonneg(delay_line_compensation_ns,
                        "delay_line_compensation_ns");
  require_finite_nonneg(pc_rise_time_ns, "pc_rise_time_ns");
  require_finite_nonneg(coincidence_window_ns, "coincidence_window_ns");
  if (switch_offset_ns > pass_through_ns) {
    throw InvalidArgumentError("switch_offset_ns exceeds pass_through_ns");
  }
  if (!(ramp_position > 0.0 && ramp_position < 1.0)) {
    throw InvalidArgumentError("ramp_position must lie in (0, 1)");
  }
  if (horizon_cycles < 0) {
    throw InvalidArgumentError("horizon_cycles must be >= 0");
  }
  int pcs = 0, arms = 0;
  int routes[4] = {0, 0, 0, 0};
  for (const ComponentSpec &c : components) {
    c.validate();
    switch (c.kind) {
      case ComponentKind::kPockelsCell:
        ++pcs;
        break;
      case ComponentKind::kCirculatorArm:
        ++arms;
        break;
      case ComponentKind::kCoupler:
        ++routes[static_cast<int>(c.route)];
        break;
      case ComponentKind::kPbs:
      case ComponentKind::kMirror:
        if (c.zone != Zone::kCirculator && c.zone != Zone::kSwitch) {
          throw InvalidArgumentError(c.name +
                                     ": PBS/MIRROR must sit in a free-space "
                                     "zone");
        }
        break;
      case ComponentKind::kFiberSegment:
      case ComponentKind::kRetroreflector:
      case ComponentKind::kFpc:
        if (c.zone != Zone::kDelay) {
          throw InvalidArgumentError(c.name + ": must sit in the delay zone");
        }
        break;
    }
  }
  if (pcs != 1) {
    throw InvalidArgumentError("memory needs exactly one POCKELS_CELL");
  }
  if (arms != 1) {
    throw InvalidArgumentError("memory needs exactly one CIRCULATOR_ARM");
  }
  for (int r = 0; r < 4; ++r) {
    if (routes[r] != 1) {
      throw InvalidArgumentError(
          "memory needs exactly one COUPLER for route " +
          to_string(static_cast<CouplingRoute>(r)));
    }
  }
}

std::vector<ComponentSpec> MemoryConfig::zone(Zone z) const {
  std::vector<ComponentSpec> out;
  for (const ComponentSpec &c : components) {
    if (c.zone == z) out.push_back(c);
  }
  return out;
}

const ComponentSpec &MemoryConfig::pockels_cell() const {
  for (const ComponentSpec &c : components) {
    if (c.kind == ComponentKind::kPockelsCell) return c;
  }
  throw InvalidArgumentError("memory has no POCKELS_CELL");
}

const ComponentSpec &MemoryConfig::circulator_arm() const {
  for (const ComponentSpec &c : components) {
    if (c.kind == ComponentKind::kCirculatorArm) return c;
  }
  throw InvalidArgumentError("memory has no CIRCULATOR_ARM");
}

double MemoryConfig::coupling(CouplingRoute route) const {
  for (const ComponentSpec &c : components) {
    if (c.kind == ComponentKind::kCoupler && c.route == route) {
      return c.mean_transmission();
    }
  }
  throw InvalidArgumentError("memory has no coupler for route " +
                             to_string(route));
}

ComponentSpec *MemoryConfig::find(const std::string &name) {
  for (ComponentSpec &c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const ComponentSpec *MemoryConfig::find(const std::string &name) const {
  return const_cast<MemoryConfig *>(this)->find(name);
}

void TransmissionParams::validate() const {
  for (double g : {g13, g12, g22, g23}) {
    if (!std::isfinite(g) || g < 0.0 || g > 1.0) {
      throw InvalidArgumentError("transmission parameters must lie in [0, 1]");
    }
  }
}

double StorageOutcome::accounted_weight() const {
  double w = absorbed_weight + residual_weight;
  for (const ExitEvent &e : exits) w += e.state.trace();
  for (const EjectionEvent &e : ejections) w += e.weight;
  return w;
}

DriveSchedule switch_schedule(int n_cycles, const MemoryConfig &cfg) {
  if (n_cycles < 0) throw InvalidArgumentError("cycle count must be >= 0");
  cfg.validate();
  const double dt = cfg.delta_tau_ns;
  const double rise = cfg.pc_rise_time_ns;
  const double half_gate = 0.5 * cfg.coincidence_window_ns;
  const double f = cfg.ramp_position;

  // Clearance between each ramp edge and the neighbouring passage instants.
  const double lead = f * dt - 0.5 * rise;
  const double trail = (1.0 - f) * dt - 0.5 * rise;
  if (!(lead > half_gate && trail > half_gate)) {
    throw UnschedulableError(
        "Pockels ramp of " + std::to_string(rise) +
        " ns does not fit between passages " + std::to_string(dt) +
        " ns apart with a " + std::to_string(cfg.coincidence_window_ns) +
        " ns gate");
  }

  DriveSchedule s;
  s.rise_time_ns = rise;
  if (n_cycles == 0) {
    s.initial = DriveLevel::kOn;
    return s;
  }
  s.initial = DriveLevel::kOff;
  if (n_cycles == 1) return s;

  const double t0 = cfg.first_passage_ns();
  if (cfg.herald_latency_ns + rise > t0) {
    throw UnschedulableError(
        "herald latency plus Pockels rise time exceeds the photon arrival "
        "at the switch; increase delay_line_compensation_ns");
  }
  const double on_start = t0 + f * dt - 0.5 * rise;
  const double off_start = t0 + (n_cycles - 1 + f) * dt - 0.5 * rise;
  s.transitions.push_back({on_start, DriveLevel::kOn});
  s.transitions.push_back({off_start, DriveLevel::kOff});
  s.validate();
  return s;
}

StorageOutcome simulate_storage(const MemoryConfig &cfg, const PureState &input,
                                int n_cycles) {
  return simulate_storage(cfg, DensityMatrix::pure(input), n_cycles);
}

StorageOutcome simulate_storage(const MemoryConfig &cfg,
                                const DensityMatrix &input, int n_cycles) {
  return simulate_storage(cfg, input, n_cycles, switch_schedule(n_cycles, cfg));
}

StorageOutcome simulate_storage(const MemoryConfig &cfg,
                                const DensityMatrix &input, int n_cycles,
                                const DriveSchedule &drive) {
  if (n_cycles < 0) throw InvalidArgumentError("cycle count must be >= 0");
  cfg.validate();
  drive.validate();

  StorageOutcome out;
  out.nominal_exit_ns = cfg.exit_time_ns(n_cycles);
  Propagator prop(out);

  const ComponentSpec &pc = cfg.pockels_cell();
  const ComponentSpec &arm = cfg.circulator_arm();
  const JonesOperator circ_fwd = circulator_operator(Direction::kForward, arm);
  const JonesOperator circ_rev = circulator_operator(Direction::kReverse, arm);
  const double circ_optics = zone_optics_transmission(cfg, Zone::kCirculator);
  const double switch_optics = zone_optics_transmission(cfg, Zone::kSwitch);
  const std::vector<ComponentSpec> delay_zone = cfg.zone(Zone::kDelay);
  const JonesOperator delay_line =
      delay_line_operator(delay_zone, cfg.x_dl_enabled);

  const double t_in = cfg.t_in_ns();
  const double t0 = cfg.first_passage_ns();
  const double to_exit = cfg.pass_through_ns - cfg.switch_offset_ns;

  // Released light: Sagnac -> circulator (reverse) -> C3.
  auto release = [&](const DensityMatrix &rho, int k, CouplingRoute route) {
    const double t_exit = cfg.exit_time_ns(k);
    DensityMatrix r = prop.absorb(rho, circ_optics);
    r = prop.eject(r, circ_rev, t_exit - 0.5 * to_exit, "circulator-reverse");
    r = prop.absorb(r, cfg.coupling(route));
    if (r.trace() > 0.0) out.exits.push_back({t_exit, k, r});
  };

  // C1 -> circulator (forward) -> Sagnac.
  DensityMatrix rho = prop.absorb(input, circ_optics);
  rho = prop.eject(rho, circ_fwd, t_in + 0.5 * cfg.switch_offset_ns,
                   "circulator-forward");
  rho = prop.absorb(rho, switch_optics);
  auto [cross, back] =
      prop.sagnac(rho, pockels_operator(drive, t0, pc));
  release(back, 0, CouplingRoute::kC1ToC3);

  DensityMatrix loop = cross;
  CouplingRoute into_c2 = CouplingRoute::kC1ToC2;
  CouplingRoute to_c3 = CouplingRoute::kC2ToC3;
  const int last = n_cycles + cfg.horizon_cycles;
  for (int k = 1; k <= last && loop.trace() > kNegligibleWeight; ++k) {
    loop = prop.absorb(loop, cfg.coupling(into_c2));
    into_c2 = CouplingRoute::kC2ToC2;
    loop = prop.absorb(loop, delay_line);
    loop = prop.absorb(loop, switch_optics);
    auto [released, kept] =
        prop.sagnac(loop, pockels_operator(drive, t0 + k * cfg.delta_tau_ns, pc));
    release(released, k, to_c3);
    loop = kept;
  }
  out.residual_weight = loop.trace();

  const double half_gate = 0.5 * cfg.coincidence_window_ns;
  for (const ExitEvent &e : out.exits) {
    if (std::abs(e.time_ns - out.nominal_exit_ns) <= half_gate) {
      out.retrieved = e;
      break;
    }
  }
  return out;
}

double efficiency(const TransmissionParams &p, int n_cycles) {
  if (n_cycles < 0) throw InvalidArgumentError("cycle count must be >= 0");
  p.validate();
  if (n_cycles == 0) return p.g13;
  return p.g12 * std::pow(p.g22, n_cycles - 1) * p.g23;
}

PathTrace f8_path_trace(int n_cycles) {
  if (n_cycles < 0) throw InvalidArgumentError("cycle count must be >= 0");
  PathTrace t;
  t.h_path.push_back("M4");
  t.v_path.push_back("M1");
  for (int i = 0; i < n_cycles; ++i) {
    t.h_path.insert(t.h_path.end(), {"M2", "M3", "storage"});
    t.v_path.insert(t.v_path.end(), {"M3", "M2", "storage"});
  }
  t.h_path.insert(t.h_path.end(), {"M2", "M3", "M1"});
  t.v_path.insert(t.v_path.end(), {"M3", "M2", "M4"});
  return t;
}

TransmissionParams derive_transmission_params(const MemoryConfig &cfg) {
  cfg.validate();
  const double circ = zone_optics_transmission(cfg, Zone::kCirculator) *
                      cfg.circulator_arm().mean_transmission();
  const double sw = zone_optics_transmission(cfg, Zone::kSwitch) *
                    cfg.pockels_cell().mean_transmission();
  const double dl = product_of_transmissions(cfg.zone(Zone::kDelay));

  TransmissionParams p;
  p.g13 = cfg.coupling(CouplingRoute::kC1ToC3) * circ * sw * circ;
  p.g12 = cfg.coupling(CouplingRoute::kC1ToC2) * circ * sw * dl;
  p.g22 = cfg.coupling(CouplingRoute::kC2ToC2) * sw * dl;
  p.g23 = cfg.coupling(CouplingRoute::kC2ToC3) * sw * circ;
  return p;
}

}  // namespace loopmem
