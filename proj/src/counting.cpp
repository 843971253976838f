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

#include "loopmem/counting.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "loopmem/errors.hpp"
#include "loopmem/rng.hpp"

namespace loopmem {

namespace {

const char *const kCsvHeader = "setting_label,setting_value,counts,acquisition_s,N,seed";

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string &s, const char *what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw InvalidArgumentError(std::string("cannot parse ") + what + " '" + s +
                               "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void CountRecord::validate() const {
  if (!std::isfinite(counts) || counts < 0.0) {
    throw InvalidArgumentError("counts must be >= 0");
  }
  if (!std::isfinite(acquisition_s) || acquisition_s <= 0.0) {
    throw InvalidArgumentError("acquisition_s must be > 0");
  }
}

void ScanDataset::validate() const {
  if (records.empty()) throw InvalidArgumentError("dataset has no records");
  for (const CountRecord &r : records) r.validate();
}

double expected_rate(const StorageOutcome &outcome,
                     const std::optional<PureState> &projector,
                     double pair_rate, double detection_eff) {
  if (pair_rate < 0.0 || detection_eff < 0.0 || detection_eff > 1.0) {
    throw InvalidArgumentError("pair_rate must be >= 0, detection_eff in [0,1]");
  }
  if (!outcome.retrieved) return 0.0;
  const double w = outcome.retrieved_weight();
  if (!(w > 0.0)) return 0.0;
  const double born =
      projector ? fidelity(outcome.retrieved->state, *projector) : 1.0;
  return pair_rate * detection_eff * w * born;
}

std::int64_t sample_counts(double rate, double acquisition_s,
                           std::uint64_t seed) {
  if (!std::isfinite(rate) || rate < 0.0) {
    throw InvalidArgumentError("rate must be >= 0");
  }
  const double mean = rate * acquisition_s;
  if (mean <= 0.0) return 0;
  Rng rng(seed);
  std::poisson_distribution<std::int64_t> poisson(mean);
  return poisson(rng);
}

ScanDataset run_scan(const MemoryConfig &cfg, const PureState &input,
                     int n_cycles, const ScanPlan &plan,
                     const SourceModel &source, std::uint64_t seed) {
  if (source.acquisition_s <= 0.0) {
    throw InvalidArgumentError("acquisition_s must be > 0");
  }
  if (source.background_rate < 0.0) {
    throw InvalidArgumentError("background_rate must be >= 0");
  }
  ScanDataset ds;
  ds.source_pair_rate = source.pair_rate;
  ds.seed = seed;
  ds.noiseless = source.noiseless;

  auto emit = [&](std::string label, double value, int n, double rate) {
    rate += source.background_rate;
    const std::uint64_t index = ds.records.size();
    CountRecord r;
    r.setting_label = std::move(label);
    r.setting_value = value;
    r.acquisition_s = source.acquisition_s;
    r.n_cycles = n;
    r.counts = source.noiseless
                   ? rate * source.acquisition_s
                   : static_cast<double>(sample_counts(
                         rate, source.acquisition_s, derive_seed(seed, index)));
    ds.records.push_back(std::move(r));
  };

  std::visit(
      [&](const auto &p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, MalusPlan>) {
          if (p.angles_rad.empty()) {
            throw InvalidArgumentError("Malus scan needs at least one angle");
          }
          const StorageOutcome out = simulate_storage(cfg, input, n_cycles);
          for (double theta : p.angles_rad) {
            emit("angle_rad", theta, n_cycles,
                 expected_rate(out, PureState::linear(theta), source.pair_rate,
                               source.detection_eff));
          }
        } else if constexpr (std::is_same_v<P, TomographyPlan>) {
          if (p.projectors.empty()) {
            throw InvalidArgumentError("tomography scan needs projectors");
          }
          const StorageOutcome out = simulate_storage(cfg, input, n_cycles);
          for (std::size_t i = 0; i < p.projectors.size(); ++i) {
            emit("proj_" + p.projectors[i], static_cast<double>(i), n_cycles,
                 expected_rate(out, PureState::named(p.projectors[i]),
                               source.pair_rate, source.detection_eff));
          }
        } else {
          if (p.n_min < 0 || p.n_max < p.n_min) {
            throw InvalidArgumentError("decay scan needs 0 <= n_min <= n_max");
          }
          for (int n = p.n_min; n <= p.n_max; ++n) {
            const StorageOutcome out = simulate_storage(cfg, input, n);
            emit("N", n, n,
                 expected_rate(out, std::nullopt, source.pair_rate,
                               source.detection_eff));
          }
        }
      },
      plan);
  return ds;
}

void write_csv(std::ostream &os, const ScanDataset &ds,
               const std::string &scenario_hash) {
  os << kCsvHeader;
  if (!scenario_hash.empty()) os << ",scenario_hash";
  os << '\n';
  for (const CountRecord &r : ds.records) {
    os << r.setting_label << ',' << format_double(r.setting_value) << ','
       << format_double(r.counts) << ',' << format_double(r.acquisition_s)
       << ',' << r.n_cycles << ',' << ds.seed;
    if (!scenario_hash.empty()) os << ',' << scenario_hash;
    os << '\n';
  }
}

ScanDataset read_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind(kCsvHeader, 0) != 0) {
    throw InvalidArgumentError("dataset CSV is missing its header");
  }
  ScanDataset ds;
  bool seed_set = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() < 6) {
      throw InvalidArgumentError("dataset CSV row has too few columns");
    }
    CountRecord r;
    r.setting_label = cells[0];
    r.setting_value = parse_double(cells[1], "setting_value");
    r.counts = parse_double(cells[2], "counts");
    r.acquisition_s = parse_double(cells[3], "acquisition_s");
    r.n_cycles = static_cast<int>(parse_double(cells[4], "N"));
    const std::uint64_t seed = std::stoull(cells[5]);
    if (seed_set && seed != ds.seed) {
      throw InvalidArgumentError("dataset CSV mixes seeds");
    }
    ds.seed = seed;
    seed_set = true;
    r.validate();
    ds.records.push_back(std::move(r));
  }
  ds.validate();
  return ds;
}

std::string to_json(const ScanDataset &ds, const std::string &scenario_hash) {
  nlohmann::ordered_json j;
  j["seed"] = ds.seed;
  j["source_pair_rate"] = ds.source_pair_rate;
  j["noiseless"] = ds.noiseless;
  if (!scenario_hash.empty()) j["scenario_hash"] = scenario_hash;
  j["records"] = nlohmann::ordered_json::array();
  for (const CountRecord &r : ds.records) {
    j["records"].push_back({{"setting_label", r.setting_label},
                            {"setting_value", r.setting_value},
                            {"counts", r.counts},
                            {"acquisition_s", r.acquisition_s},
                            {"N", r.n_cycles},
                            {"seed", ds.seed}});
  }
  return j.dump(2);
}

ScanDataset dataset_from_json(const std::string &text) {
  ScanDataset ds;
  try {
    const auto j = nlohmann::json::parse(text);
    ds.seed = j.at("seed").get<std::uint64_t>();
    ds.source_pair_rate = j.value("source_pair_rate", 0.0);
    ds.noiseless = j.value("noiseless", false);
    for (const auto &jr : j.at("records")) {
      CountRecord r;
      r.setting_label = jr.at("setting_label").get<std::string>();
      r.setting_value = jr.at("setting_value").get<double>();
      r.counts = jr.at("counts").get<double>();
      r.acquisition_s = jr.at("acquisition_s").get<double>();
      r.n_cycles = jr.at("N").get<int>();
      ds.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgumentError(std::string("malformed dataset JSON: ") +
                               e.what());
  }
  ds.validate();
  return ds;
}

}  // namespace loopmem
