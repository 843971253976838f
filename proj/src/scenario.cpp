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

#include "loopmem/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "loopmem/errors.hpp"
#include "loopmem/polar.hpp"
#include "loopmem/presets.hpp"

namespace loopmem {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

int line_of(const YAML::Node &n) {
  const YAML::Mark m = n.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

std::string join(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

void require_map(const YAML::Node &n, const std::string &path) {
  if (!n.IsMap()) throw SchemaError(path, line_of(n), "expected a mapping");
}

void check_keys(const YAML::Node &n, const std::string &path,
                std::initializer_list<const char *> allowed) {
  require_map(n, path);
  for (const auto &kv : n) {
    const std::string key = kv.first.as<std::string>();
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char *a) { return key == a; });
    if (!known) {
      throw SchemaError(join(path, key), line_of(kv.first), "unknown field");
    }
  }
}

template <typename T>
T scalar(const YAML::Node &n, const std::string &path, const char *what) {
  if (!n.IsScalar()) {
    throw SchemaError(path, line_of(n), std::string("expected ") + what);
  }
  try {
    return n.as<T>();
  } catch (const YAML::Exception &) {
    throw SchemaError(path, line_of(n), std::string("expected ") + what);
  }
}

double real(const YAML::Node &n, const std::string &path) {
  const double v = scalar<double>(n, path, "a number");
  if (!std::isfinite(v)) throw SchemaError(path, line_of(n), "must be finite");
  return v;
}

int integer(const YAML::Node &n, const std::string &path) {
  return scalar<int>(n, path, "an integer");
}

bool boolean(const YAML::Node &n, const std::string &path) {
  return scalar<bool>(n, path, "true or false");
}

std::string text(const YAML::Node &n, const std::string &path) {
  return scalar<std::string>(n, path, "a string");
}

template <typename F>
void for_each_item(const YAML::Node &n, const std::string &path, F &&f) {
  if (!n.IsSequence()) throw SchemaError(path, line_of(n), "expected a list");
  for (std::size_t i = 0; i < n.size(); ++i) {
    f(n[i], path + "[" + std::to_string(i) + "]");
  }
}

template <typename F>
void maybe(const YAML::Node &parent, const char *key, const std::string &path,
           F &&f) {
  const YAML::Node n = parent[key];
  if (n) f(n, join(path, key));
}

// Rethrows a library validation failure as a schema error at `node`.
template <typename F>
void validated(const YAML::Node &node, const std::string &path, F &&f) {
  try {
    f();
  } catch (const SchemaError &) {
    throw;
  } catch (const Error &e) {
    throw SchemaError(path, line_of(node), e.what());
  }
}

Zone default_zone(ComponentKind kind, const YAML::Node &n,
                  const std::string &path) {
  switch (kind) {
    case ComponentKind::kPockelsCell:
      return Zone::kSwitch;
    case ComponentKind::kCirculatorArm:
      return Zone::kCirculator;
    case ComponentKind::kFiberSegment:
    case ComponentKind::kRetroreflector:
    case ComponentKind::kFpc:
      return Zone::kDelay;
    case ComponentKind::kCoupler:
      return Zone::kCoupling;
    default:
      throw SchemaError(join(path, "zone"), line_of(n),
                        "required for " + to_string(kind));
  }
}

void apply_component_fields(const YAML::Node &n, const std::string &path,
                            ComponentSpec &c) {
  maybe(n, "transmission", path, [&](const YAML::Node &v, const std::string &p) {
    c.transmission_h = c.transmission_v = real(v, p);
  });
  maybe(n, "transmission_h", path, [&](const YAML::Node &v, const std::string &p) {
    c.transmission_h = real(v, p);
  });
  maybe(n, "transmission_v", path, [&](const YAML::Node &v, const std::string &p) {
    c.transmission_v = real(v, p);
  });
  maybe(n, "rotation_error", path, [&](const YAML::Node &v, const std::string &p) {
    c.rotation_error = real(v, p);
  });
  maybe(n, "static_phase", path, [&](const YAML::Node &v, const std::string &p) {
    c.static_phase = real(v, p);
  });
  maybe(n, "length_m", path, [&](const YAML::Node &v, const std::string &p) {
    c.length_m = real(v, p);
  });
  maybe(n, "atten_db_per_km", path, [&](const YAML::Node &v, const std::string &p) {
    c.atten_db_per_km = real(v, p);
  });
  maybe(n, "wavelength_nm", path, [&](const YAML::Node &v, const std::string &p) {
    validated(v, p, [&] {
      c.atten_db_per_km = fiber_attenuation_db_per_km(real(v, p));
    });
  });
  maybe(n, "route", path, [&](const YAML::Node &v, const std::string &p) {
    validated(v, p, [&] { c.route = coupling_route_from_string(text(v, p)); });
  });
  maybe(n, "zone", path, [&](const YAML::Node &v, const std::string &p) {
    validated(v, p, [&] { c.zone = zone_from_string(text(v, p)); });
  });
  validated(n, path, [&] { c.validate(); });
}

#define LOOPMEM_COMPONENT_KEYS                                              \
  "transmission", "transmission_h", "transmission_v", "rotation_error",    \
      "static_phase", "length_m", "atten_db_per_km", "wavelength_nm",      \
      "route", "zone"

ComponentSpec parse_component(const YAML::Node &n, const std::string &path) {
  check_keys(n, path, {"kind", "name", LOOPMEM_COMPONENT_KEYS});
  if (!n["kind"]) throw SchemaError(join(path, "kind"), line_of(n), "missing");
  if (!n["name"]) throw SchemaError(join(path, "name"), line_of(n), "missing");
  ComponentSpec c;
  validated(n["kind"], join(path, "kind"), [&] {
    c.kind = component_kind_from_string(text(n["kind"], join(path, "kind")));
  });
  c.name = text(n["name"], join(path, "name"));
  if (!n["zone"]) c.zone = default_zone(c.kind, n, path);
  if (c.kind == ComponentKind::kCoupler && !n["route"]) {
    throw SchemaError(join(path, "route"), line_of(n), "missing for coupler");
  }
  apply_component_fields(n, path, c);
  return c;
}

void parse_memory(const YAML::Node &n, const std::string &path,
                  bool has_preset, MemoryConfig &m) {
  check_keys(n, path,
             {"delta_tau_ns", "pass_through_ns", "switch_offset_ns",
              "herald_latency_ns", "delay_line_compensation_ns",
              "pc_rise_time_ns", "coincidence_window_ns", "ramp_position",
              "x_dl_enabled", "horizon_cycles", "components",
              "component_overrides"});
  if (!has_preset) {
    if (!n["delta_tau_ns"]) {
      throw SchemaError(join(path, "delta_tau_ns"), line_of(n),
                        "missing (required without a preset)");
    }
    if (!n["components"]) {
      throw SchemaError(join(path, "components"), line_of(n),
                        "missing (required without a preset)");
    }
  }
  const std::pair<const char *, double *> reals[] = {
      {"delta_tau_ns", &m.delta_tau_ns},
      {"pass_through_ns", &m.pass_through_ns},
      {"switch_offset_ns", &m.switch_offset_ns},
      {"herald_latency_ns", &m.herald_latency_ns},
      {"delay_line_compensation_ns", &m.delay_line_compensation_ns},
      {"pc_rise_time_ns", &m.pc_rise_time_ns},
      {"coincidence_window_ns", &m.coincidence_window_ns},
      {"ramp_position", &m.ramp_position},
  };
  for (const auto &[key, dst] : reals) {
    maybe(n, key, path, [&](const YAML::Node &v, const std::string &p) {
      *dst = real(v, p);
    });
  }
  maybe(n, "x_dl_enabled", path, [&](const YAML::Node &v, const std::string &p) {
    m.x_dl_enabled = boolean(v, p);
  });
  maybe(n, "horizon_cycles", path, [&](const YAML::Node &v, const std::string &p) {
    m.horizon_cycles = integer(v, p);
  });
  maybe(n, "components", path, [&](const YAML::Node &v, const std::string &p) {
    m.components.clear();
    for_each_item(v, p, [&](const YAML::Node &item, const std::string &ip) {
      m.components.push_back(parse_component(item, ip));
    });
  });
  maybe(n, "component_overrides", path,
        [&](const YAML::Node &v, const std::string &p) {
          require_map(v, p);
          for (const auto &kv : v) {
            const std::string name = kv.first.as<std::string>();
            const std::string cp = join(p, name);
            ComponentSpec *c = m.find(name);
            if (c == nullptr) {
              throw SchemaError(cp, line_of(kv.first), "no such component");
            }
            check_keys(kv.second, cp, {LOOPMEM_COMPONENT_KEYS});
            apply_component_fields(kv.second, cp, *c);
          }
        });
  validated(n, path, [&] { m.validate(); });
}

#undef LOOPMEM_COMPONENT_KEYS

void parse_source(const YAML::Node &n, const std::string &path,
                  SourceModel &s) {
  check_keys(n, path,
             {"pair_rate", "detection_eff", "acquisition_s", "background_rate",
              "noiseless"});
  const std::pair<const char *, double *> reals[] = {
      {"pair_rate", &s.pair_rate},
      {"detection_eff", &s.detection_eff},
      {"acquisition_s", &s.acquisition_s},
      {"background_rate", &s.background_rate},
  };
  for (const auto &[key, dst] : reals) {
    maybe(n, key, path, [&](const YAML::Node &v, const std::string &p) {
      *dst = real(v, p);
    });
  }
  maybe(n, "noiseless", path, [&](const YAML::Node &v, const std::string &p) {
    s.noiseless = boolean(v, p);
  });
}

std::vector<double> default_malus_angles() {
  std::vector<double> out;
  for (int deg = 0; deg < 180; deg += 15) out.push_back(deg * kDegToRad);
  return out;
}

nlohmann::ordered_json component_json(const ComponentSpec &c) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(c.kind);
  j["name"] = c.name;
  j["zone"] = to_string(c.zone);
  j["transmission_h"] = c.transmission_h;
  j["transmission_v"] = c.transmission_v;
  j["rotation_error"] = c.rotation_error;
  j["static_phase"] = c.static_phase;
  j["length_m"] = c.length_m;
  j["atten_db_per_km"] = c.atten_db_per_km;
  if (c.kind == ComponentKind::kCoupler) j["route"] = to_string(c.route);
  return j;
}

}  // namespace

void Scenario::validate() const {
  memory.validate();
  if (inputs.empty()) throw InvalidArgumentError("inputs must not be empty");
  for (const std::string &s : inputs) PureState::named(s);
  for (const std::string &s : tomo_projectors) PureState::named(s);
  if (n_cycles < 0) throw InvalidArgumentError("n_cycles must be >= 0");
  if (n_min < 0 || n_max < n_min) {
    throw InvalidArgumentError("n_range must satisfy 0 <= min <= max");
  }
  if (!(source.pair_rate >= 0.0) || !(source.acquisition_s > 0.0) ||
      !(source.detection_eff >= 0.0 && source.detection_eff <= 1.0) ||
      !(source.background_rate >= 0.0)) {
    throw InvalidArgumentError("source parameters out of range");
  }
  if (mc_samples < 0 || mc_samples == 1) {
    throw InvalidArgumentError("mc_samples must be 0 or >= 2");
  }
  if (budget.n_max < 0) throw InvalidArgumentError("budget.n_max must be >= 0");
}

std::string Scenario::canonical_json() const {
  nlohmann::ordered_json j;
  j["preset"] = preset;
  nlohmann::ordered_json m;
  m["delta_tau_ns"] = memory.delta_tau_ns;
  m["pass_through_ns"] = memory.pass_through_ns;
  m["switch_offset_ns"] = memory.switch_offset_ns;
  m["herald_latency_ns"] = memory.herald_latency_ns;
  m["delay_line_compensation_ns"] = memory.delay_line_compensation_ns;
  m["pc_rise_time_ns"] = memory.pc_rise_time_ns;
  m["coincidence_window_ns"] = memory.coincidence_window_ns;
  m["ramp_position"] = memory.ramp_position;
  m["x_dl_enabled"] = memory.x_dl_enabled;
  m["horizon_cycles"] = memory.horizon_cycles;
  m["components"] = nlohmann::ordered_json::array();
  for (const ComponentSpec &c : memory.components) {
    m["components"].push_back(component_json(c));
  }
  j["memory"] = m;
  j["inputs"] = inputs;
  j["n_cycles"] = n_cycles;
  j["n_range"] = {n_min, n_max};
  j["source"] = {{"pair_rate", source.pair_rate},
                 {"detection_eff", source.detection_eff},
                 {"acquisition_s", source.acquisition_s},
                 {"background_rate", source.background_rate},
                 {"noiseless", source.noiseless}};
  j["malus_angles_rad"] = malus_angles_rad;
  j["tomo_projectors"] = tomo_projectors;
  j["mc_samples"] = mc_samples;
  nlohmann::ordered_json b;
  b["wavelength_nm"] = budget.wavelength_nm ? nlohmann::ordered_json(*budget.wavelength_nm)
                                            : nlohmann::ordered_json(nullptr);
  b["fiber_length_m"] = budget.fiber_length_m
                            ? nlohmann::ordered_json(*budget.fiber_length_m)
                            : nlohmann::ordered_json(nullptr);
  b["n_max"] = budget.n_max;
  j["budget"] = b;
  return j.dump();
}

std::string Scenario::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t Scenario::require_seed() const {
  if (!seed) {
    throw InvalidArgumentError(
        "sampled scans need a seed (scenario 'seed' or --seed)");
  }
  return *seed;
}

Scenario preset_scenario(const std::string &name) {
  Scenario s;
  s.preset = name;
  s.memory = preset_memory(name);
  s.malus_angles_rad = default_malus_angles();
  const double eta1 = efficiency(derive_transmission_params(s.memory), 1);
  s.source.pair_rate = 1.0e4 / (s.source.acquisition_s * eta1);
  s.seed = 1;
  return s;
}

Scenario parse_scenario(const std::string &yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException &e) {
    throw SchemaError("<document>", e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) {
    throw SchemaError("<document>", 0, "empty scenario");
  }
  check_keys(root, "",
             {"preset", "seed", "memory", "inputs", "n_cycles", "n_range",
              "source", "malus", "tomography", "budget", "output_dir"});

  Scenario s;
  bool has_preset = false;
  if (root["preset"]) {
    const std::string name = text(root["preset"], "preset");
    validated(root["preset"], "preset", [&] { s = preset_scenario(name); });
    has_preset = true;
  } else {
    s.malus_angles_rad = default_malus_angles();
    s.memory.components.clear();
    s.seed.reset();
  }

  if (root["memory"]) {
    parse_memory(root["memory"], "memory", has_preset, s.memory);
  } else if (!has_preset) {
    throw SchemaError("memory", line_of(root), "missing (required without a preset)");
  }

  maybe(root, "seed", "", [&](const YAML::Node &v, const std::string &p) {
    s.seed = scalar<std::uint64_t>(v, p, "an unsigned 64-bit integer");
  });
  maybe(root, "inputs", "", [&](const YAML::Node &v, const std::string &p) {
    s.inputs.clear();
    for_each_item(v, p, [&](const YAML::Node &item, const std::string &ip) {
      const std::string name = text(item, ip);
      validated(item, ip, [&] { PureState::named(name); });
      s.inputs.push_back(name);
    });
  });
  maybe(root, "n_cycles", "", [&](const YAML::Node &v, const std::string &p) {
    s.n_cycles = integer(v, p);
  });
  maybe(root, "n_range", "", [&](const YAML::Node &v, const std::string &p) {
    if (!v.IsSequence() || v.size() != 2) {
      throw SchemaError(p, line_of(v), "expected [min, max]");
    }
    s.n_min = integer(v[0], p + "[0]");
    s.n_max = integer(v[1], p + "[1]");
  });
  maybe(root, "source", "", [&](const YAML::Node &v, const std::string &p) {
    parse_source(v, p, s.source);
  });
  maybe(root, "malus", "", [&](const YAML::Node &v, const std::string &p) {
    check_keys(v, p, {"angles_deg", "angles_rad"});
    if (v["angles_deg"] && v["angles_rad"]) {
      throw SchemaError(p, line_of(v), "give angles_deg or angles_rad, not both");
    }
    maybe(v, "angles_deg", p, [&](const YAML::Node &a, const std::string &ap) {
      s.malus_angles_rad.clear();
      for_each_item(a, ap, [&](const YAML::Node &item, const std::string &ip) {
        s.malus_angles_rad.push_back(real(item, ip) * kDegToRad);
      });
    });
    maybe(v, "angles_rad", p, [&](const YAML::Node &a, const std::string &ap) {
      s.malus_angles_rad.clear();
      for_each_item(a, ap, [&](const YAML::Node &item, const std::string &ip) {
        s.malus_angles_rad.push_back(real(item, ip));
      });
    });
  });
  maybe(root, "tomography", "", [&](const YAML::Node &v, const std::string &p) {
    check_keys(v, p, {"projectors", "mc_samples"});
    maybe(v, "projectors", p, [&](const YAML::Node &a, const std::string &ap) {
      if (!a.IsSequence() || a.size() != 4) {
        throw SchemaError(ap, line_of(a), "expected four projector names");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        const std::string ip = ap + "[" + std::to_string(i) + "]";
        s.tomo_projectors[i] = text(a[i], ip);
        validated(a[i], ip, [&] { PureState::named(s.tomo_projectors[i]); });
      }
    });
    maybe(v, "mc_samples", p, [&](const YAML::Node &a, const std::string &ap) {
      s.mc_samples = integer(a, ap);
    });
  });
  maybe(root, "budget", "", [&](const YAML::Node &v, const std::string &p) {
    check_keys(v, p, {"wavelength_nm", "fiber_length_m", "n_max"});
    maybe(v, "wavelength_nm", p, [&](const YAML::Node &a, const std::string &ap) {
      s.budget.wavelength_nm = real(a, ap);
    });
    maybe(v, "fiber_length_m", p, [&](const YAML::Node &a, const std::string &ap) {
      s.budget.fiber_length_m = real(a, ap);
    });
    maybe(v, "n_max", p, [&](const YAML::Node &a, const std::string &ap) {
      s.budget.n_max = integer(a, ap);
    });
  });
  maybe(root, "output_dir", "", [&](const YAML::Node &v, const std::string &p) {
    s.output_dir = text(v, p);
  });

  validated(root, "<document>", [&] { s.validate(); });
  return s;
}

Scenario load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace loopmem
