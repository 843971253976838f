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
 * @file counting.hpp
 * @brief Synthetic herald/signal coincidence counts from storage outcomes.
 *
 * Record i of a sampled scan draws from its own stream,
 * derive_seed(scan seed, i), so records can be produced in any order.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "loopmem/loop_engine.hpp"
#include "loopmem/polar.hpp"

namespace loopmem {

/// One acquisition. `counts` is an integer for sampled scans and the exact
/// Poisson mean for noiseless scans.
struct CountRecord {
  std::string setting_label;
  double setting_value = 0.0;
  double counts = 0.0;
  double acquisition_s = 60.0;
  int n_cycles = 0;

  void validate() const;
};

struct ScanDataset {
  std::vector<CountRecord> records;
  double source_pair_rate = 0.0;
  std::uint64_t seed = 0;
  bool noiseless = false;

  void validate() const;
};

/// Source and detection model shared by every record of a scan.
struct SourceModel {
  double pair_rate = 1.0e5;      // heralded pairs per second at C1
  double detection_eff = 1.0;    // lumped detector and analysis-stage loss
  double acquisition_s = 60.0;
  double background_rate = 0.0;  // flat accidental rate, counts/s
  bool noiseless = false;
};

struct MalusPlan {
  std::vector<double> angles_rad;  // linear analyzer angles
};

struct TomographyPlan {
  std::vector<std::string> projectors;  // named states, e.g. H V D R
};

struct DecayPlan {
  int n_min = 1;
  int n_max = 8;
};

using ScanPlan = std::variant<MalusPlan, TomographyPlan, DecayPlan>;

/// pair_rate * detection_eff * retrieved weight * <proj|rho_cond|proj>.
/// With no projector (open analyzer) the Born factor is 1. Zero when the
/// outcome has no retrieved event.
double expected_rate(const StorageOutcome &outcome,
                     const std::optional<PureState> &projector,
                     double pair_rate, double detection_eff);

/// Poisson(rate * acquisition_s) draw from a stream seeded with `seed`.
std::int64_t sample_counts(double rate, double acquisition_s,
                           std::uint64_t seed);

ScanDataset run_scan(const MemoryConfig &cfg, const PureState &input,
                     int n_cycles, const ScanPlan &plan,
                     const SourceModel &source, std::uint64_t seed);

/// Flat table: setting_label,setting_value,counts,acquisition_s,N,seed and,
/// when non-empty, a trailing scenario_hash column.
void write_csv(std::ostream &os, const ScanDataset &ds,
               const std::string &scenario_hash = "");
ScanDataset read_csv(std::istream &is);
std::string to_json(const ScanDataset &ds, const std::string &scenario_hash = "");
ScanDataset dataset_from_json(const std::string &text);

/// Shortest round-trip decimal rendering used by every text output.
std::string format_double(double v);

}  // namespace loopmem
