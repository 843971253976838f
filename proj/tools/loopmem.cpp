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

// loopmem <simulate|decay|malus|tomo|budget|reproduce> --scenario <path>
//         [--preset name] [--seed u64] [--out dir]
//
// The output directory defaults to $LOOPMEM_OUT_DIR, then the scenario's
// output_dir, then ./loopmem-out. Failures print one JSON object on stderr
// and exit nonzero.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "loopmem/errors.hpp"
#include "loopmem/pipelines.hpp"
#include "loopmem/scenario.hpp"

namespace {

int fail(const std::string &kind, const std::string &message,
         const std::string &field = "", int line = 0, int code = 1) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (!field.empty()) j["field"] = field;
  if (line > 0) j["line"] = line;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Loop-and-switch photonic memory simulator"};
  app.require_subcommand(1, 1);

  std::string scenario_path, preset, out_dir, target;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--scenario", scenario_path, "YAML scenario file");
    sub->add_option("--preset", preset,
                    "built-in preset (base when --scenario is absent)");
    sub->add_option("--seed", seed, "RNG seed, overrides the scenario");
    sub->add_option("--out", out_dir, "output directory");
  };
  const std::pair<const char *, const char *> commands[] = {
      {"simulate", "storage outcomes per input state"},
      {"decay", "efficiency scan over N and decay fit"},
      {"malus", "analyzer-angle scan and visibility fit"},
      {"tomo", "tomography scan, MLE and Monte Carlo error"},
      {"budget", "per-cycle loss budget and lifetime"},
  };
  for (const auto &[name, help] : commands) {
    add_common(app.add_subcommand(name, help));
  }
  CLI::App *reproduce = app.add_subcommand("reproduce", "figure data bundles");
  reproduce->add_option("target", target, "fig2c | fig3 | fig4")->required();
  add_common(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail("usage", e.what(), "", 0, 2);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    loopmem::Scenario scenario;
    if (!scenario_path.empty()) {
      scenario = loopmem::load_scenario(scenario_path);
      if (!preset.empty() && preset != scenario.preset) {
        throw loopmem::InvalidArgumentError(
            "--preset '" + preset + "' conflicts with the scenario's preset '" +
            scenario.preset + "'");
      }
    } else if (!preset.empty()) {
      scenario = loopmem::preset_scenario(preset);
    } else {
      return fail("usage", "one of --scenario or --preset is required", "", 0, 2);
    }
    if (seed) scenario.seed = *seed;

    std::string dir = out_dir;
    if (dir.empty()) {
      if (const char *env = std::getenv("LOOPMEM_OUT_DIR"); env && *env) dir = env;
    }
    if (dir.empty()) dir = scenario.output_dir;
    if (dir.empty()) dir = "loopmem-out";

    const loopmem::RunReport rep = loopmem::run(scenario, command, target, dir);
    std::cout << rep.summary_json;
    return 0;
  } catch (const loopmem::SchemaError &e) {
    return fail(e.kind(), e.what(), e.field(), e.line());
  } catch (const loopmem::Error &e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception &e) {
    return fail("internal", e.what());
  }
}
