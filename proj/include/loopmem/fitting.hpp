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

#include <span>
#include <string>
#include <vector>

#include "loopmem/counting.hpp"
#include "loopmem/loop_engine.hpp"
#include "loopmem/optics.hpp"

namespace loopmem {

/// C(theta) = A (1 + V cos 2(theta - theta0)) / 2.
struct MalusFit {
  double visibility = 0.0;
  double theta0 = 0.0;
  double amplitude = 0.0;
  double sigma_visibility = 0.0;
  double visibility_unclamped = 0.0;
  bool clamped = false;
};

/// C(N) = prefactor * gamma^(N-1).
struct DecayFit {
  double gamma_per_cycle = 1.0;
  double sigma_gamma = 0.0;
  double prefactor = 0.0;
  double gamma_unclamped = 1.0;
  int zeros_excluded = 0;
  bool clamped = false;
};

struct BudgetReport {
  TransmissionParams params;
  std::vector<double> eta_table;  // eta_N for N = 0..n_max
  double per_cycle = 0.0;
  double lifetime_cycles_1e = 0.0;  // infinity when per_cycle >= 1
  double lifetime_time_1e_ns = 0.0;
  double delta_tau_ns = 0.0;
  double wavelength_nm = 0.0;
};

/// Poisson-weighted least squares (sigma_i^2 = max(count_i, 1)). The model
/// is linear in (a, b, c) = A/2 * (1, V cos 2theta0, V sin 2theta0), so the
/// weighted optimum is solved exactly; V's error comes from the parameter
/// covariance by the delta method. Throws RankError for fewer than five
/// distinct angles (mod pi) or a rank-deficient design, NoSignalError when
/// the fitted mean level is not positive.
MalusFit fit_malus(std::span<const double> angles_rad,
                   std::span<const double> counts);
MalusFit fit_malus(std::span<const CountRecord> records);

/// Weighted least squares of ln C against N - 1 with weights C. Zero-count
/// points are dropped and counted. Throws InvalidArgumentError for fewer
/// than three points or N < 1, NoSignalError when fewer than two non-zero
/// points remain.
DecayFit fit_decay(std::span<const int> n_values, std::span<const double> counts);
DecayFit fit_decay(std::span<const CountRecord> records);

/// Per-cycle efficiency, eta table and 1/e lifetimes of a component
/// inventory with the given loop time.
BudgetReport project_budget(std::span<const ComponentSpec> inventory,
                            double delta_tau_ns, double wavelength_nm,
                            int n_max);

std::string to_json(const MalusFit &f);
std::string to_json(const DecayFit &f);
std::string to_json(const BudgetReport &b);

}  // namespace loopmem
