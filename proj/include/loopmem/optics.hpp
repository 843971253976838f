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
 * @file optics.hpp
 * @brief Parametric component models for the fiber-coupled loop memory.
 *
 * Transmission conventions:
 *  - Circulator, switch-zone and coupler components: power transmission
 *    per pass.
 *  - Delay-zone components (fiber, connectors, retroreflector): power
 *    transmission per out-and-back round trip.
 */

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loopmem/polar.hpp"

namespace loopmem {

enum class ComponentKind {
  kPbs,
  kPockelsCell,
  kCirculatorArm,
  kFiberSegment,
  kRetroreflector,
  kCoupler,
  kMirror,
  kFpc,
};

enum class Zone { kCirculator, kSwitch, kDelay, kCoupling };

/// Which beam is being mode-matched into which fiber coupler.
enum class CouplingRoute { kC1ToC2, kC1ToC3, kC2ToC2, kC2ToC3 };

std::string to_string(ComponentKind kind);
std::string to_string(Zone zone);
std::string to_string(CouplingRoute route);
ComponentKind component_kind_from_string(const std::string &s);
Zone zone_from_string(const std::string &s);
CouplingRoute coupling_route_from_string(const std::string &s);

struct ComponentSpec {
  ComponentKind kind = ComponentKind::kMirror;
  std::string name;
  Zone zone = Zone::kSwitch;
  double transmission_h = 1.0;
  double transmission_v = 1.0;
  double rotation_error = 0.0;  // rad, deviation from a nominal 90 deg flip
  double static_phase = 0.0;    // rad, birefringent or arm phase
  double length_m = 0.0;        // fiber only
  double atten_db_per_km = 0.0; // fiber only
  CouplingRoute route = CouplingRoute::kC1ToC3;  // couplers only

  /// Throws InvalidArgumentError / GainError on out-of-range fields.
  void validate() const;

  /// Polarization-averaged power transmission including fiber attenuation.
  double mean_transmission() const;

  static ComponentSpec pbs(std::string name, Zone zone, double t);
  static ComponentSpec mirror(std::string name, Zone zone, double t);
  static ComponentSpec pockels_cell(std::string name, double t,
                                    double rotation_error = 0.0);
  static ComponentSpec circulator_arm(std::string name, double t,
                                      double arm_phase = 0.0);
  static ComponentSpec fiber(std::string name, double length_m,
                             double atten_db_per_km, double insertion_t = 1.0,
                             double static_phase = 0.0);
  static ComponentSpec retroreflector(std::string name, double t);
  static ComponentSpec coupler(std::string name, CouplingRoute route,
                               double efficiency);
  static ComponentSpec fpc(std::string name, double rotation_error = 0.0);
};

enum class DriveLevel { kOff, kOn };

struct DriveTransition {
  double time_ns = 0.0;  // ramp start
  DriveLevel target = DriveLevel::kOn;
};

/// Pockels-cell drive: piecewise-constant levels joined by linear ramps of
/// length rise_time_ns that start at each transition time.
struct DriveSchedule {
  DriveLevel initial = DriveLevel::kOff;
  std::vector<DriveTransition> transitions;
  double rise_time_ns = 0.0;

  void validate() const;
};

/// Drive level in [0, 1] at time t.
double pockels_level(const DriveSchedule &s, double t_ns);

/// Rotator of angle level * (pi/2 + rotation_error), attenuated by the
/// cell's per-pass transmission.
JonesOperator pockels_operator(const DriveSchedule &s, double t_ns,
                               const ComponentSpec &spec);
JonesOperator pockels_operator_at_level(double level,
                                        const ComponentSpec &spec);

/// Ideal polarizing beamsplitter: (H-port, V-port).
std::pair<DensityMatrix, DensityMatrix> pbs_route(const DensityMatrix &state);

/// 10^(-atten * L_eff / 10), L_eff doubled for an out-and-back line.
double fiber_transmission(double length_m, double atten_db_per_km,
                          bool round_trip);

/// Typical single-mode fiber attenuation (dB/km) at 780 nm and 1550 nm.
double fiber_attenuation_db_per_km(double wavelength_nm);

enum class Direction { kForward, kReverse };

/// Forward: non-reciprocal bit flip; reverse: identity. The component's
/// static_phase is a path-length offset of the arm that carries the V input
/// forward (and the H input in reverse); transmission is the lumped
/// ejection plus absorption loss per pass.
JonesOperator circulator_operator(Direction direction,
                                  const ComponentSpec &spec);

/// The PBS Sagnac splits a Pockels operator P into the part that crosses to
/// the opposite port (diag(P00, P11)) and the part returned to the entry
/// port (anti-diagonal of P). Both are identical for entry from either side.
struct SagnacSplit {
  JonesOperator cross;
  JonesOperator back;
};

SagnacSplit sagnac_split(const JonesOperator &pockels);

/// One out-and-back trip through the delay zone: per-pass loss and
/// birefringence, the retroreflector and (when enabled) the polarization
/// controller flip at the turnaround.
JonesOperator delay_line_operator(std::span<const ComponentSpec> delay_zone,
                                  bool x_dl_enabled);

}  // namespace loopmem
