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

#include "loopmem/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "loopmem/errors.hpp"

namespace loopmem {

namespace {

template <typename E, std::size_t N>
std::string lookup_name(E value,
                        const std::array<std::pair<E, const char *>, N> &t) {
  for (const auto &[v, n] : t) {
    if (v == value) return n;
  }
  return "?";
}

template <typename E, std::size_t N>
E lookup_value(const std::string &name,
               const std::array<std::pair<E, const char *>, N> &t,
               const char *what) {
  for (const auto &[v, n] : t) {
    if (name == n) return v;
  }
  throw InvalidArgumentError(std::string("unknown ") + what + " '" + name +
                             "'");
}

constexpr std::array<std::pair<ComponentKind, const char *>, 8> kKindNames{{
    {ComponentKind::kPbs, "PBS"},
    {ComponentKind::kPockelsCell, "POCKELS_CELL"},
    {ComponentKind::kCirculatorArm, "CIRCULATOR_ARM"},
    {ComponentKind::kFiberSegment, "FIBER_SEGMENT"},
    {ComponentKind::kRetroreflector, "RETROREFLECTOR"},
    {ComponentKind::kCoupler, "COUPLER"},
    {ComponentKind::kMirror, "MIRROR"},
    {ComponentKind::kFpc, "FPC"},
}};

constexpr std::array<std::pair<Zone, const char *>, 4> kZoneNames{{
    {Zone::kCirculator, "circulator"},
    {Zone::kSwitch, "switch"},
    {Zone::kDelay, "delay"},
    {Zone::kCoupling, "coupling"},
}};

constexpr std::array<std::pair<CouplingRoute, const char *>, 4> kRouteNames{{
    {CouplingRoute::kC1ToC2, "C1-C2"},
    {CouplingRoute::kC1ToC3, "C1-C3"},
    {CouplingRoute::kC2ToC2, "C2-C2"},
    {CouplingRoute::kC2ToC3, "C2-C3"},
}};

void check_unit_interval(double t, const std::string &what) {
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidArgumentError(what + " must be a non-negative number");
  }
  if (t > 1.0) throw GainError(what + " exceeds one");
}

}  // namespace

std::string to_string(ComponentKind kind) { return lookup_name(kind, kKindNames); }
std::string to_string(Zone zone) { return lookup_name(zone, kZoneNames); }
std::string to_string(CouplingRoute r) { return lookup_name(r, kRouteNames); }

ComponentKind component_kind_from_string(const std::string &s) {
  return lookup_value(s, kKindNames, "component kind");
}
Zone zone_from_string(const std::string &s) {
  return lookup_value(s, kZoneNames, "zone");
}
CouplingRoute coupling_route_from_string(const std::string &s) {
  return lookup_value(s, kRouteNames, "coupling route");
}

void ComponentSpec::validate() const {
  const std::string who = name.empty() ? to_string(kind) : name;
  check_unit_interval(transmission_h, who + ".transmission_h");
  check_unit_interval(transmission_v, who + ".transmission_v");
  if (!std::isfinite(length_m) || length_m < 0.0) {
    throw InvalidArgumentError(who + ".length_m must be >= 0");
  }
  if (!std::isfinite(atten_db_per_km) || atten_db_per_km < 0.0) {
    throw InvalidArgumentError(who + ".atten_db_per_km must be >= 0");
  }
  if (!std::isfinite(rotation_error) || !std::isfinite(static_phase)) {
    throw InvalidArgumentError(who + " angles must be finite");
  }
}

double ComponentSpec::mean_transmission() const {
  double t = 0.5 * (transmission_h + transmission_v);
  if (kind == ComponentKind::kFiberSegment) {
    t *= fiber_transmission(length_m, atten_db_per_km, /*round_trip=*/true);
  }
  return t;
}

ComponentSpec ComponentSpec::pbs(std::string name, Zone zone, double t) {
  ComponentSpec s;
  s.kind = ComponentKind::kPbs;
  s.name = std::move(name);
  s.zone = zone;
  s.transmission_h = s.transmission_v = t;
  return s;
}

ComponentSpec ComponentSpec::mirror(std::string name, Zone zone, double t) {
  ComponentSpec s = pbs(std::move(name), zone, t);
  s.kind = ComponentKind::kMirror;
  return s;
}

ComponentSpec ComponentSpec::pockels_cell(std::string name, double t,
                                          double rotation_error) {
  ComponentSpec s;
  s.kind = ComponentKind::kPockelsCell;
  s.name = std::move(name);
  s.zone = Zone::kSwitch;
  s.transmission_h = s.transmission_v = t;
  s.rotation_error = rotation_error;
  return s;
}

ComponentSpec ComponentSpec::circulator_arm(std::string name, double t,
                                            double arm_phase) {
  ComponentSpec s;
  s.kind = ComponentKind::kCirculatorArm;
  s.name = std::move(name);
  s.zone = Zone::kCirculator;
  s.transmission_h = s.transmission_v = t;
  s.static_phase = arm_phase;
  return s;
}

ComponentSpec ComponentSpec::fiber(std::string name, double length_m,
                                   double atten_db_per_km, double insertion_t,
                                   double static_phase) {
  ComponentSpec s;
  s.kind = ComponentKind::kFiberSegment;
  s.name = std::move(name);
  s.zone = Zone::kDelay;
  s.transmission_h = s.transmission_v = insertion_t;
  s.length_m = length_m;
  s.atten_db_per_km = atten_db_per_km;
  s.static_phase = static_phase;
  return s;
}

ComponentSpec ComponentSpec::retroreflector(std::string name, double t) {
  ComponentSpec s;
  s.kind = ComponentKind::kRetroreflector;
  s.name = std::move(name);
  s.zone = Zone::kDelay;
  s.transmission_h = s.transmission_v = t;
  return s;
}

ComponentSpec ComponentSpec::coupler(std::string name, CouplingRoute route,
                                     double efficiency) {
  ComponentSpec s;
  s.kind = ComponentKind::kCoupler;
  s.name = std::move(name);
  s.zone = Zone::kCoupling;
  s.route = route;
  s.transmission_h = s.transmission_v = efficiency;
  return s;
}

ComponentSpec ComponentSpec::fpc(std::string name, double rotation_error) {
  ComponentSpec s;
  s.kind = ComponentKind::kFpc;
  s.name = std::move(name);
  s.zone = Zone::kDelay;
  s.rotation_error = rotation_error;
  return s;
}

void DriveSchedule::validate() const {
  if (!std::isfinite(rise_time_ns) || rise_time_ns < 0.0) {
    throw InvalidArgumentError("rise_time must be >= 0");
  }
  for (std::size_t i = 1; i < transitions.size(); ++i) {
    if (!(transitions[i].time_ns > transitions[i - 1].time_ns)) {
      throw InvalidArgumentError(
          "drive transitions must be strictly increasing in time");
    }
  }
}

double pockels_level(const DriveSchedule &s, double t) {
  double level = s.initial == DriveLevel::kOn ? 1.0 : 0.0;
  for (const DriveTransition &tr : s.transitions) {
    if (t < tr.time_ns) break;
    const double target = tr.target == DriveLevel::kOn ? 1.0 : 0.0;
    // A ramp interrupted by the next transition restarts from wherever
    // the level had got to.
    if (s.rise_time_ns <= 0.0) {
      level = target;
    } else {
      const double frac = std::min(1.0, (t - tr.time_ns) / s.rise_time_ns);
      level = level + (target - level) * frac;
    }
  }
  return level;
}

JonesOperator pockels_operator_at_level(double level,
                                        const ComponentSpec &spec) {
  if (spec.kind != ComponentKind::kPockelsCell) {
    throw ComponentKindError("expected a POCKELS_CELL spec, got " +
                             to_string(spec.kind));
  }
  spec.validate();
  const JonesOperator rot =
      jones::rotator(level * (M_PI / 2.0 + spec.rotation_error));
  return jones::attenuator(spec.transmission_h, spec.transmission_v) * rot;
}

JonesOperator pockels_operator(const DriveSchedule &s, double t_ns,
                               const ComponentSpec &spec) {
  return pockels_operator_at_level(pockels_level(s, t_ns), spec);
}

std::pair<DensityMatrix, DensityMatrix> pbs_route(const DensityMatrix &state) {
  const Matrix2c &m = state.matrix();
  Matrix2c h = Matrix2c::Zero();
  Matrix2c v = Matrix2c::Zero();
  h(0, 0) = m(0, 0);
  v(1, 1) = m(1, 1);
  return {DensityMatrix::trusted(h), DensityMatrix::trusted(v)};
}

double fiber_transmission(double length_m, double atten_db_per_km,
                          bool round_trip) {
  if (length_m < 0.0 || atten_db_per_km < 0.0) {
    throw InvalidArgumentError("fiber length and attenuation must be >= 0");
  }
  const double l_km = (round_trip ? 2.0 : 1.0) * length_m / 1000.0;
  return std::pow(10.0, -atten_db_per_km * l_km / 10.0);
}

double fiber_attenuation_db_per_km(double wavelength_nm) {
  if (std::abs(wavelength_nm - 780.0) <= 50.0) return 4.0;
  if (std::abs(wavelength_nm - 1550.0) <= 50.0) return 0.2;
  throw InvalidArgumentError("no default fiber attenuation for " +
                             std::to_string(wavelength_nm) + " nm");
}

JonesOperator circulator_operator(Direction direction,
                                  const ComponentSpec &spec) {
  if (spec.kind != ComponentKind::kCirculatorArm) {
    throw ComponentKindError("expected a CIRCULATOR_ARM spec, got " +
                             to_string(spec.kind));
  }
  spec.validate();
  const complex arm = std::polar(1.0, spec.static_phase);
  Matrix2c j = Matrix2c::Zero();
  if (direction == Direction::kForward) {
    j(0, 1) = arm;
    j(1, 0) = 1.0;
  } else {
    j(0, 0) = arm;
    j(1, 1) = 1.0;
  }
  return jones::attenuator(spec.transmission_h, spec.transmission_v) *
         JonesOperator(j);
}

SagnacSplit sagnac_split(const JonesOperator &pockels) {
  const Matrix2c &p = pockels.matrix();
  Matrix2c cross = Matrix2c::Zero();
  Matrix2c back = Matrix2c::Zero();
  cross(0, 0) = p(0, 0);
  cross(1, 1) = p(1, 1);
  back(0, 1) = p(0, 1);
  back(1, 0) = p(1, 0);
  return {JonesOperator(cross), JonesOperator(back)};
}

JonesOperator delay_line_operator(std::span<const ComponentSpec> delay_zone,
                                  bool x_dl_enabled) {
  double amp_h = 1.0;  // per-pass amplitude factors
  double amp_v = 1.0;
  double phase = 0.0;  // one-way birefringent phase (V relative to H)
  double turnaround = 1.0;
  double fpc_error = 0.0;
  for (const ComponentSpec &c : delay_zone) {
    c.validate();
    switch (c.kind) {
      case ComponentKind::kFiberSegment: {
        const double att =
            fiber_transmission(c.length_m, c.atten_db_per_km, true);
        amp_h *= std::pow(c.transmission_h * att, 0.25);
        amp_v *= std::pow(c.transmission_v * att, 0.25);
        phase += c.static_phase;
        break;
      }
      case ComponentKind::kRetroreflector:
        turnaround *= c.mean_transmission();
        break;
      case ComponentKind::kFpc:
        fpc_error += c.rotation_error;
        amp_h *= std::pow(c.transmission_h, 0.25);
        amp_v *= std::pow(c.transmission_v, 0.25);
        break;
      default:
        throw ComponentKindError(to_string(c.kind) +
                                 " does not belong in the delay zone");
    }
  }
  Matrix2c pass = Matrix2c::Zero();
  pass(0, 0) = amp_h;
  pass(1, 1) = amp_v * std::polar(1.0, phase);
  const JonesOperator one_way(pass);
  const JonesOperator flip = x_dl_enabled
                                 ? jones::rotator(M_PI / 2.0 + fpc_error)
                                 : jones::identity();
  return one_way * flip.attenuated(turnaround) * one_way;
}

}  // namespace loopmem
