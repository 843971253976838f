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
 * @file loop_engine.hpp
 * @brief Timed figure-eight loop memory: switching schedule, deterministic
 * amplitude bookkeeping over the circulator / Sagnac switch / delay line
 * graph, and the closed-form efficiency model.
 *
 * Time origin is the herald detection. The photon leaves coupler C1 at
 * t_in = delay_line_compensation_ns and meets the Pockels cell for the k-th
 * time at t0 + k * delta_tau with t0 = t_in + switch_offset_ns. Passage 0 is
 * the entry; with the cell on the photon is returned to the circulator
 * (pass-through), with it off the photon crosses into the delay line. On a
 * later passage the cell on keeps the photon stored, off releases it.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopmem/optics.hpp"
#include "loopmem/polar.hpp"

namespace loopmem {

struct MemoryConfig {
  double delta_tau_ns = 36.5;
  double pass_through_ns = 10.7;
  double switch_offset_ns = 5.35;  // C1 -> Pockels cell
  double herald_latency_ns = 240.0;
  double delay_line_compensation_ns = 495.0;
  double pc_rise_time_ns = 10.0;
  double coincidence_window_ns = 4.0;
  /// Ramp centres sit this fraction of the way between adjacent passages.
  double ramp_position = 0.5;
  bool x_dl_enabled = true;
  /// Passages simulated after the nominal release before the remaining
  /// in-loop weight is reported as residual.
  int horizon_cycles = 2000;
  std::vector<ComponentSpec> components;

  /// Throws InvalidArgumentError when a field is out of range or a required
  /// component (Pockels cell, circulator arm, all four coupling routes) is
  /// missing or duplicated.
  void validate() const;

  std::vector<ComponentSpec> zone(Zone z) const;
  const ComponentSpec &pockels_cell() const;
  const ComponentSpec &circulator_arm() const;
  double coupling(CouplingRoute route) const;
  ComponentSpec *find(const std::string &name);
  const ComponentSpec *find(const std::string &name) const;

  double t_in_ns() const { return delay_line_compensation_ns; }
  double first_passage_ns() const { return t_in_ns() + switch_offset_ns; }
  double exit_time_ns(int k) const {
    return t_in_ns() + pass_through_ns + k * delta_tau_ns;
  }
};

struct TransmissionParams {
  double g13 = 1.0;
  double g12 = 1.0;
  double g22 = 1.0;
  double g23 = 1.0;

  void validate() const;
};

struct ExitEvent {
  double time_ns = 0.0;
  int passage = 0;
  DensityMatrix state;
};

struct EjectionEvent {
  double time_ns = 0.0;
  double weight = 0.0;
  std::string port;
};

struct StorageOutcome {
  std::vector<ExitEvent> exits;
  std::vector<EjectionEvent> ejections;
  double absorbed_weight = 0.0;
  /// Weight still circulating when the simulation horizon was reached.
  double residual_weight = 0.0;
  double nominal_exit_ns = 0.0;
  std::optional<ExitEvent> retrieved;

  double retrieved_weight() const {
    return retrieved ? retrieved->state.trace() : 0.0;
  }
  /// exits + ejections + absorbed + residual; 1 for a unit-trace input.
  double accounted_weight() const;
};

struct PathTrace {
  std::vector<std::string> h_path;
  std::vector<std::string> v_path;
};

/// N = 0: cell on throughout; N = 1: off throughout; N >= 2: on-ramp between
/// passages 0 and 1, off-ramp between passages N-1 and N. Throws
/// UnschedulableError when a ramp plus the coincidence gate cannot fit
/// between passages, or the herald path cannot arm the cell in time.
DriveSchedule switch_schedule(int n_cycles, const MemoryConfig &cfg);

StorageOutcome simulate_storage(const MemoryConfig &cfg, const PureState &input,
                                int n_cycles);
StorageOutcome simulate_storage(const MemoryConfig &cfg,
                                const DensityMatrix &input, int n_cycles);
/// Runs with an explicit drive; `n_cycles` fixes the gated exit time.
StorageOutcome simulate_storage(const MemoryConfig &cfg,
                                const DensityMatrix &input, int n_cycles,
                                const DriveSchedule &drive);

/// eta_N = g13 for N = 0, g12 * g22^(N-1) * g23 otherwise.
double efficiency(const TransmissionParams &p, int n_cycles);

/// Mirror/zone labels visited by the |H> and |V> components.
PathTrace f8_path_trace(int n_cycles);

/// Segment transmissions as products of component transmissions.
TransmissionParams derive_transmission_params(const MemoryConfig &cfg);

}  // namespace loopmem
