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

#include "loopmem/pipelines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "loopmem/counting.hpp"
#include "loopmem/errors.hpp"
#include "loopmem/presets.hpp"
#include "loopmem/rng.hpp"
#include "loopmem/tomography.hpp"

namespace loopmem {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// Stream tags keep the sampled scans of different commands independent.
enum Stream : std::uint64_t {
  kDecayStream = 1,
  kMalusStream = 2,
  kTomoStream = 3,
  kTomoMcStream = 4,
};

std::uint64_t stream_seed(std::uint64_t seed, Stream s, std::uint64_t index) {
  return derive_seed(derive_seed(seed, s), index);
}

bool is_linear(const std::string &state) {
  return state == "H" || state == "V" || state == "D" || state == "A";
}

class Output {
 public:
  Output(fs::path dir, const Scenario &s)
      : dir_(std::move(dir)),
        hash_(s.hash()),
        seed_(s.seed ? std::to_string(*s.seed) : std::string()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw IoError("cannot create output directory '" + dir_.string() + "'");
    }
  }

  const std::string &hash() const { return hash_; }
  const std::string &seed() const { return seed_; }

  void write(const std::string &name, const std::string &content) {
    const fs::path path = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write '" + tmp.string() + "'");
      out << content;
      if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename into '" + path.string() + "'");
    files_.push_back(path);
  }

  /// CSV with scenario_hash and seed appended to every row.
  void table(const std::string &name, const std::vector<std::string> &header,
             const std::vector<std::vector<std::string>> &rows) {
    std::ostringstream os;
    for (const std::string &h : header) os << h << ',';
    os << "scenario_hash,seed\n";
    for (const auto &row : rows) {
      for (const std::string &cell : row) os << cell << ',';
      os << hash_ << ',' << seed_ << '\n';
    }
    write(name, os.str());
  }

  void dataset(const std::string &name, const ScanDataset &ds) {
    std::ostringstream os;
    write_csv(os, ds, hash_);
    write(name, os.str());
  }

  /// JSON summary stamped with hash and seed.
  std::string summary(const std::string &name, ojson body) {
    ojson j;
    j["scenario_hash"] = hash_;
    j["seed"] = seed_.empty() ? ojson(nullptr) : ojson(std::stoull(seed_));
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    const std::string text = j.dump(2) + "\n";
    write(name, text);
    return text;
  }

  std::vector<fs::path> take_files() { return std::move(files_); }

 private:
  fs::path dir_;
  std::string hash_;
  std::string seed_;
  std::vector<fs::path> files_;
};

std::string f(double v) { return format_double(v); }

ojson params_json(const TransmissionParams &p) {
  return {{"g13", p.g13}, {"g12", p.g12}, {"g22", p.g22}, {"g23", p.g23}};
}

ojson malus_json(const MalusFit &fit) {
  return {{"visibility", fit.visibility},
          {"sigma_visibility", fit.sigma_visibility},
          {"theta0", fit.theta0},
          {"amplitude", fit.amplitude},
          {"clamped", fit.clamped}};
}

ojson decay_json(const DecayFit &fit) {
  return {{"gamma_per_cycle", fit.gamma_per_cycle},
          {"sigma_gamma", fit.sigma_gamma},
          {"prefactor", fit.prefactor},
          {"zeros_excluded", fit.zeros_excluded},
          {"clamped", fit.clamped}};
}

ojson tomo_json(const ReconstructionResult &r) {
  return ojson::parse(to_json(r));
}

ScanDataset decay_scan(const Scenario &s, int n_min, int n_max) {
  const std::uint64_t seed = s.source.noiseless ? 0 : s.require_seed();
  return run_scan(s.memory, PureState::named(s.inputs.front()), 0,
                  DecayPlan{n_min, n_max}, s.source,
                  stream_seed(seed, kDecayStream, 0));
}

DecayFit fit_positive_n(const ScanDataset &ds) {
  std::vector<CountRecord> usable;
  for (const CountRecord &r : ds.records) {
    if (r.n_cycles >= 1) usable.push_back(r);
  }
  return fit_decay(usable);
}

ScanDataset malus_scan(const Scenario &s, std::size_t input, int n) {
  const std::uint64_t seed = s.source.noiseless ? 0 : s.require_seed();
  return run_scan(s.memory, PureState::named(s.inputs[input]), n,
                  MalusPlan{s.malus_angles_rad}, s.source,
                  stream_seed(seed, kMalusStream,
                              static_cast<std::uint64_t>(n) * 64 + input));
}

ScanDataset tomo_scan(const Scenario &s, std::size_t input, int n) {
  const std::uint64_t seed = s.source.noiseless ? 0 : s.require_seed();
  TomographyPlan plan;
  plan.projectors.assign(s.tomo_projectors.begin(), s.tomo_projectors.end());
  return run_scan(s.memory, PureState::named(s.inputs[input]), n, plan,
                  s.source,
                  stream_seed(seed, kTomoStream,
                              static_cast<std::uint64_t>(n) * 64 + input));
}

ReconstructionResult tomo_reconstruct(const Scenario &s, const ScanDataset &ds,
                                      std::size_t input, int n) {
  const MeasurementSet m = MeasurementSet::from_names(s.tomo_projectors);
  // The bootstrap needs a seed even for noiseless counts.
  const std::uint64_t seed = s.seed.value_or(0);
  return reconstruct_records(
      ds.records, m, PureState::named(s.inputs[input]), s.mc_samples,
      stream_seed(seed, kTomoMcStream,
                  static_cast<std::uint64_t>(n) * 64 + input));
}

// --- subcommands ---------------------------------------------------------

std::string cmd_simulate(const Scenario &s, Output &out) {
  std::vector<std::vector<std::string>> rows, exits;
  ojson runs = ojson::array();
  for (const std::string &name : s.inputs) {
    const PureState input = PureState::named(name);
    for (int n = s.n_min; n <= s.n_max; ++n) {
      const StorageOutcome o = simulate_storage(s.memory, input, n);
      double ejected = 0.0;
      for (const EjectionEvent &e : o.ejections) ejected += e.weight;
      const double w = o.retrieved_weight();
      const double fid =
          o.retrieved && w > 0.0 ? fidelity(o.retrieved->state, input) : 0.0;
      rows.push_back({name, std::to_string(n), f(w), f(fid),
                      f(o.nominal_exit_ns), f(o.absorbed_weight), f(ejected),
                      f(o.residual_weight), std::to_string(o.exits.size())});
      for (const ExitEvent &e : o.exits) {
        const bool gated = o.retrieved && e.passage == o.retrieved->passage;
        exits.push_back({name, std::to_string(n), std::to_string(e.passage),
                         f(e.time_ns), f(e.state.trace()), gated ? "1" : "0"});
      }
      runs.push_back({{"input", name},
                      {"N", n},
                      {"retrieved_weight", w},
                      {"fidelity", fid}});
    }
  }
  out.table("simulate.csv",
            {"input", "N", "retrieved_weight", "fidelity", "exit_time_ns",
             "absorbed_weight", "ejected_weight", "residual_weight", "n_exits"},
            rows);
  out.table("simulate_exits.csv",
            {"input", "N", "passage", "time_ns", "weight", "gated"}, exits);
  return out.summary("simulate.json",
                     {{"params", params_json(derive_transmission_params(s.memory))},
                      {"runs", runs}});
}

std::string cmd_decay(const Scenario &s, Output &out) {
  const ScanDataset ds = decay_scan(s, s.n_min, s.n_max);
  out.dataset("decay_counts.csv", ds);
  const DecayFit fit = fit_positive_n(ds);
  const TransmissionParams p = derive_transmission_params(s.memory);
  return out.summary("decay_fit.json", {{"input", s.inputs.front()},
                                        {"fit", decay_json(fit)},
                                        {"g22_model", p.g22}});
}

std::string cmd_malus(const Scenario &s, Output &out) {
  ojson fits;
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    const ScanDataset ds = malus_scan(s, i, s.n_cycles);
    out.dataset("malus_counts_" + s.inputs[i] + ".csv", ds);
    fits[s.inputs[i]] = malus_json(fit_malus(ds.records));
  }
  return out.summary("malus_fit.json", {{"N", s.n_cycles}, {"fits", fits}});
}

std::string cmd_tomo(const Scenario &s, Output &out) {
  ojson results;
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    const ScanDataset ds = tomo_scan(s, i, s.n_cycles);
    out.dataset("tomo_counts_" + s.inputs[i] + ".csv", ds);
    results[s.inputs[i]] = tomo_json(tomo_reconstruct(s, ds, i, s.n_cycles));
  }
  return out.summary("tomo.json", {{"N", s.n_cycles}, {"results", results}});
}

std::string cmd_budget(const Scenario &s, Output &out) {
  double delta_tau = 0.0, wavelength = 0.0;
  const std::vector<ComponentSpec> inv = budget_inventory(s, &delta_tau, &wavelength);
  const BudgetReport rep = project_budget(inv, delta_tau, wavelength, s.budget.n_max);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < rep.eta_table.size(); ++n) {
    rows.push_back({std::to_string(n), f(rep.eta_table[n])});
  }
  out.table("budget.csv", {"N", "eta"}, rows);
  double fiber_factor = 1.0;
  for (const ComponentSpec &c : inv) {
    if (c.kind == ComponentKind::kFiberSegment) {
      fiber_factor *= fiber_transmission(c.length_m, c.atten_db_per_km, true);
    }
  }
  ojson body = ojson::parse(to_json(rep));
  body["fiber_factor"] = fiber_factor;
  return out.summary("budget.json", body);
}

std::string reproduce_fig2c(const Scenario &s, Output &out) {
  const int n_max = std::max(s.n_max, 1);
  const ScanDataset ds = decay_scan(s, 0, n_max);
  const TransmissionParams p = derive_transmission_params(s.memory);
  const double flux =
      s.source.pair_rate * s.source.detection_eff * s.source.acquisition_s;
  std::vector<std::vector<std::string>> rows;
  for (const CountRecord &r : ds.records) {
    const double eta = flux > 0.0 ? r.counts / flux : 0.0;
    const double sigma = flux > 0.0 ? std::sqrt(r.counts) / flux : 0.0;
    rows.push_back({std::to_string(r.n_cycles), f(efficiency(p, r.n_cycles)),
                    f(r.counts), f(eta), f(sigma)});
  }
  out.table("fig2c.csv", {"N", "eta_model", "counts", "eta_measured", "sigma_eta"},
            rows);
  const DecayFit fit = fit_positive_n(ds);
  // eta_N = A * gamma^N for N >= 1, with A = C_1 / (flux * gamma).
  const double prefactor_fit =
      flux > 0.0 ? fit.prefactor / (flux * fit.gamma_per_cycle) : 0.0;
  return out.summary(
      "fig2c.json",
      {{"input", s.inputs.front()},
       {"params", params_json(p)},
       {"eta_pass_through", efficiency(p, 0)},
       {"gamma_22_fit", fit.gamma_per_cycle},
       {"sigma_gamma_22", fit.sigma_gamma},
       {"eta_prefactor_fit", prefactor_fit},
       {"eta_prefactor_model", p.g12 * p.g23 / p.g22}});
}

struct StateQuality {
  std::optional<MalusFit> malus;
  ReconstructionResult tomo;
};

StateQuality quality(const Scenario &s, std::size_t i, int n,
                     ScanDataset *malus_ds, ScanDataset *tomo_ds) {
  StateQuality q;
  if (is_linear(s.inputs[i])) {
    *malus_ds = malus_scan(s, i, n);
    q.malus = fit_malus(malus_ds->records);
  }
  *tomo_ds = tomo_scan(s, i, n);
  q.tomo = tomo_reconstruct(s, *tomo_ds, i, n);
  return q;
}

std::string reproduce_fig3(const Scenario &s, Output &out) {
  std::vector<std::vector<std::string>> malus_rows, tomo_rows;
  ojson vis, fid;
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    ScanDataset mds, tds;
    const StateQuality q = quality(s, i, s.n_cycles, &mds, &tds);
    const std::string &name = s.inputs[i];
    if (q.malus) {
      double peak = 0.0;
      for (const CountRecord &r : mds.records) peak = std::max(peak, r.counts);
      for (const CountRecord &r : mds.records) {
        const double model =
            0.5 * q.malus->amplitude *
            (1.0 + q.malus->visibility *
                       std::cos(2.0 * (r.setting_value - q.malus->theta0)));
        malus_rows.push_back({name, f(r.setting_value), f(r.counts),
                              f(peak > 0.0 ? r.counts / peak : 0.0),
                              f(peak > 0.0 ? model / peak : 0.0)});
      }
      vis[name] = malus_json(*q.malus);
    }
    for (std::size_t k = 0; k < tds.records.size(); ++k) {
      tomo_rows.push_back({name, s.tomo_projectors[k], f(tds.records[k].counts)});
    }
    fid[name] = {{"fidelity", q.tomo.fidelity},
                 {"mc_mean", q.tomo.mc_mean},
                 {"mc_std", q.tomo.mc_std}};
  }
  out.table("fig3_malus.csv",
            {"input", "angle_rad", "counts", "normalized", "model_normalized"},
            malus_rows);
  out.table("fig3_tomo.csv", {"input", "projector", "counts"}, tomo_rows);
  return out.summary("fig3.json",
                     {{"N", s.n_cycles}, {"visibility", vis}, {"fidelity", fid}});
}

std::string reproduce_fig4(const Scenario &s, Output &out) {
  std::vector<std::vector<std::string>> rows;
  ojson points = ojson::array();
  for (int n = 0; n <= s.n_cycles; ++n) {
    for (std::size_t i = 0; i < s.inputs.size(); ++i) {
      ScanDataset mds, tds;
      const StateQuality q = quality(s, i, n, &mds, &tds);
      const std::string &name = s.inputs[i];
      rows.push_back({name, std::to_string(n),
                      q.malus ? f(q.malus->visibility) : "",
                      q.malus ? f(q.malus->sigma_visibility) : "",
                      f(q.tomo.fidelity), f(q.tomo.mc_std)});
      ojson pt = {{"input", name}, {"N", n}};
      if (q.malus) {
        pt["visibility"] = q.malus->visibility;
        pt["sigma_visibility"] = q.malus->sigma_visibility;
      }
      pt["fidelity"] = q.tomo.fidelity;
      pt["fidelity_mc_std"] = q.tomo.mc_std;
      points.push_back(pt);
    }
  }
  out.table("fig4.csv",
            {"input", "N", "visibility", "sigma_visibility", "fidelity",
             "fidelity_mc_std"},
            rows);
  return out.summary("fig4.json", {{"points", points}});
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<ComponentSpec> budget_inventory(const Scenario &s,
                                            double *delta_tau_ns,
                                            double *wavelength_nm) {
  std::vector<ComponentSpec> inv = s.memory.components;
  double tau = s.memory.delta_tau_ns;
  for (ComponentSpec &c : inv) {
    if (c.kind != ComponentKind::kFiberSegment) continue;
    if (s.budget.fiber_length_m) c.length_m = *s.budget.fiber_length_m;
    if (s.budget.wavelength_nm) {
      c.atten_db_per_km = fiber_attenuation_db_per_km(*s.budget.wavelength_nm);
    }
  }
  if (s.budget.fiber_length_m) tau = loop_time_ns(*s.budget.fiber_length_m);
  if (delta_tau_ns) *delta_tau_ns = tau;
  if (wavelength_nm) *wavelength_nm = s.budget.wavelength_nm.value_or(780.0);
  return inv;
}

RunReport run(const Scenario &scenario, const std::string &subcommand,
              const std::string &target, const fs::path &out_dir) {
  scenario.validate();
  Output out(out_dir, scenario);
  RunReport rep;
  std::string command = subcommand;
  if (subcommand == "simulate") {
    rep.summary_json = cmd_simulate(scenario, out);
  } else if (subcommand == "decay") {
    rep.summary_json = cmd_decay(scenario, out);
  } else if (subcommand == "malus") {
    rep.summary_json = cmd_malus(scenario, out);
  } else if (subcommand == "tomo") {
    rep.summary_json = cmd_tomo(scenario, out);
  } else if (subcommand == "budget") {
    rep.summary_json = cmd_budget(scenario, out);
  } else if (subcommand == "reproduce") {
    command += " " + target;
    if (target == "fig2c") {
      rep.summary_json = reproduce_fig2c(scenario, out);
    } else if (target == "fig3") {
      rep.summary_json = reproduce_fig3(scenario, out);
    } else if (target == "fig4") {
      rep.summary_json = reproduce_fig4(scenario, out);
    } else {
      throw InvalidArgumentError("reproduce target must be fig2c, fig3 or fig4, got '" +
                                 target + "'");
    }
  } else {
    throw InvalidArgumentError("unknown subcommand '" + subcommand + "'");
  }

  ojson meta;
  meta["command"] = command;
  meta["scenario_hash"] = out.hash();
  meta["seed"] = scenario.seed ? ojson(*scenario.seed) : ojson(nullptr);
  meta["timestamp_utc"] = utc_timestamp();
  meta["files"] = ojson::array();
  // Copy before write() appends run_meta itself.
  std::vector<fs::path> written = out.take_files();
  for (const fs::path &p : written) meta["files"].push_back(p.filename().string());
  out.write("run_meta.json", meta.dump(2) + "\n");
  for (fs::path &p : out.take_files()) written.push_back(std::move(p));
  rep.files = std::move(written);
  return rep;
}

}  // namespace loopmem
