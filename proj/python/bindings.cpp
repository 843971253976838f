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

// Python bindings. Results come back as plain dicts; density matrices as
// 2x2 complex numpy arrays.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loopmem/errors.hpp"
#include "loopmem/fitting.hpp"
#include "loopmem/pipelines.hpp"
#include "loopmem/presets.hpp"
#include "loopmem/scenario.hpp"
#include "loopmem/tomography.hpp"

namespace py = pybind11;
using namespace loopmem;

namespace {

py::dict params_dict(const TransmissionParams &p) {
  py::dict d;
  d["g13"] = p.g13;
  d["g12"] = p.g12;
  d["g22"] = p.g22;
  d["g23"] = p.g23;
  return d;
}

TransmissionParams params_from(const py::dict &d) {
  TransmissionParams p;
  p.g13 = d["g13"].cast<double>();
  p.g12 = d["g12"].cast<double>();
  p.g22 = d["g22"].cast<double>();
  p.g23 = d["g23"].cast<double>();
  return p;
}

py::dict simulate(const Scenario &s, const std::string &input, int n_cycles) {
  s.memory.validate();
  const PureState psi = PureState::named(input);
  const StorageOutcome o = simulate_storage(s.memory, psi, n_cycles);
  py::dict d;
  d["retrieved_weight"] = o.retrieved_weight();
  d["absorbed_weight"] = o.absorbed_weight;
  d["residual_weight"] = o.residual_weight;
  d["nominal_exit_ns"] = o.nominal_exit_ns;
  if (o.retrieved) {
    d["fidelity"] = fidelity(o.retrieved->state, psi);
    d["rho"] = Matrix2c(o.retrieved->state.conditional().matrix());
  } else {
    d["fidelity"] = py::none();
    d["rho"] = py::none();
  }
  py::list exits;
  for (const ExitEvent &e : o.exits) {
    py::dict x;
    x["passage"] = e.passage;
    x["time_ns"] = e.time_ns;
    x["weight"] = e.state.trace();
    exits.append(x);
  }
  d["exits"] = exits;
  double ejected = 0.0;
  for (const EjectionEvent &e : o.ejections) ejected += e.weight;
  d["ejected_weight"] = ejected;
  return d;
}

py::dict malus_dict(const MalusFit &f) {
  py::dict d;
  d["visibility"] = f.visibility;
  d["sigma_visibility"] = f.sigma_visibility;
  d["theta0"] = f.theta0;
  d["amplitude"] = f.amplitude;
  d["visibility_unclamped"] = f.visibility_unclamped;
  d["clamped"] = f.clamped;
  return d;
}

py::dict decay_dict(const DecayFit &f) {
  py::dict d;
  d["gamma_per_cycle"] = f.gamma_per_cycle;
  d["sigma_gamma"] = f.sigma_gamma;
  d["prefactor"] = f.prefactor;
  d["gamma_unclamped"] = f.gamma_unclamped;
  d["zeros_excluded"] = f.zeros_excluded;
  d["clamped"] = f.clamped;
  return d;
}

py::dict reconstruct(const std::array<double, 4> &counts,
                     const std::array<std::string, 4> &projectors,
                     const std::optional<std::string> &target, int mc_samples,
                     std::uint64_t seed) {
  const MeasurementSet m = MeasurementSet::from_names(projectors);
  std::optional<PureState> t;
  if (target) t = PureState::named(*target);
  ReconstructionResult r = mle_reconstruct(counts, m, t);
  if (t && mc_samples > 0) {
    const McStats mc = monte_carlo_uncertainty(counts, m, *t, mc_samples, seed);
    r.mc_mean = mc.mean;
    r.mc_std = mc.std;
    r.n_samples = mc.n_samples;
  }
  py::dict d;
  d["rho"] = Matrix2c(r.rho.matrix());
  d["fidelity"] = t ? py::object(py::float_(r.fidelity)) : py::object(py::none());
  d["purity"] = r.rho.purity();
  d["mc_mean"] = r.mc_mean;
  d["mc_std"] = r.mc_std;
  d["n_samples"] = r.n_samples;
  d["converged"] = r.converged;
  return d;
}

py::dict budget(double fiber_length_m, double wavelength_nm,
                const std::string &inventory, std::optional<double> delta_tau_ns,
                int n_max) {
  std::vector<ComponentSpec> inv;
  if (inventory == "improved") {
    inv = improved_inventory(fiber_length_m, wavelength_nm);
  } else if (inventory == "as-built") {
    inv = as_built_inventory(fiber_length_m, wavelength_nm);
  } else {
    throw InvalidArgumentError("inventory must be 'improved' or 'as-built'");
  }
  const BudgetReport b = project_budget(
      inv, delta_tau_ns.value_or(loop_time_ns(fiber_length_m)), wavelength_nm, n_max);
  py::dict d;
  d["params"] = params_dict(b.params);
  d["eta_table"] = b.eta_table;
  d["per_cycle"] = b.per_cycle;
  d["lifetime_cycles_1e"] = b.lifetime_cycles_1e;
  d["lifetime_time_1e_ns"] = b.lifetime_time_1e_ns;
  d["delta_tau_ns"] = b.delta_tau_ns;
  d["wavelength_nm"] = b.wavelength_nm;
  return d;
}

void set_component(Scenario &s, const std::string &name, const std::string &field,
                   double value) {
  ComponentSpec *c = s.memory.find(name);
  if (c == nullptr) throw InvalidArgumentError("no component named '" + name + "'");
  if (field == "transmission") {
    c->transmission_h = c->transmission_v = value;
  } else if (field == "transmission_h") {
    c->transmission_h = value;
  } else if (field == "transmission_v") {
    c->transmission_v = value;
  } else if (field == "rotation_error") {
    c->rotation_error = value;
  } else if (field == "static_phase") {
    c->static_phase = value;
  } else if (field == "length_m") {
    c->length_m = value;
  } else if (field == "atten_db_per_km") {
    c->atten_db_per_km = value;
  } else {
    throw InvalidArgumentError("unknown component field '" + field + "'");
  }
  c->validate();
}

}  // namespace

PYBIND11_MODULE(_loopmem, m) {
  m.doc() = "Loop memory simulator core";

  static py::exception<Error> base_exc(m, "LoopmemError");
  static py::exception<SchemaError> schema_exc(m, "SchemaError", base_exc.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SchemaError &e) {
      py::object err = py::handle(schema_exc.ptr())(e.what());
      err.attr("field") = e.field();
      err.attr("line") = e.line();
      err.attr("kind") = e.kind();
      PyErr_SetObject(schema_exc.ptr(), err.ptr());
    } catch (const Error &e) {
      py::object err = py::handle(base_exc.ptr())(e.what());
      err.attr("kind") = e.kind();
      PyErr_SetObject(base_exc.ptr(), err.ptr());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_preset", &preset_scenario, py::arg("name"))
      .def_static("from_yaml", &parse_scenario, py::arg("text"))
      .def_static("load", &load_scenario, py::arg("path"))
      .def_readonly("preset", &Scenario::preset)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("inputs", &Scenario::inputs)
      .def_readwrite("n_cycles", &Scenario::n_cycles)
      .def_readwrite("n_min", &Scenario::n_min)
      .def_readwrite("n_max", &Scenario::n_max)
      .def_readwrite("mc_samples", &Scenario::mc_samples)
      .def_readwrite("malus_angles_rad", &Scenario::malus_angles_rad)
      .def_property(
          "noiseless", [](const Scenario &s) { return s.source.noiseless; },
          [](Scenario &s, bool v) { s.source.noiseless = v; })
      .def_property(
          "delta_tau_ns", [](const Scenario &s) { return s.memory.delta_tau_ns; },
          [](Scenario &s, double v) { s.memory.delta_tau_ns = v; })
      .def_property(
          "x_dl_enabled", [](const Scenario &s) { return s.memory.x_dl_enabled; },
          [](Scenario &s, bool v) { s.memory.x_dl_enabled = v; })
      .def_property_readonly("component_names",
                             [](const Scenario &s) {
                               std::vector<std::string> names;
                               for (const auto &c : s.memory.components) {
                                 names.push_back(c.name);
                               }
                               return names;
                             })
      .def("set_component", &set_component, py::arg("name"), py::arg("field"),
           py::arg("value"))
      .def("validate", &Scenario::validate)
      .def("hash", &Scenario::hash)
      .def("canonical_json", &Scenario::canonical_json);

  m.def("preset_names", &preset_names);
  m.def(
      "transmission_params",
      [](const Scenario &s) { return params_dict(derive_transmission_params(s.memory)); },
      py::arg("scenario"));
  m.def(
      "efficiency",
      [](const py::dict &p, int n) { return efficiency(params_from(p), n); },
      py::arg("params"), py::arg("n_cycles"));
  m.def("simulate", &simulate, py::arg("scenario"), py::arg("input"),
        py::arg("n_cycles"));
  m.def(
      "fit_malus",
      [](const std::vector<double> &a, const std::vector<double> &c) {
        return malus_dict(fit_malus(a, c));
      },
      py::arg("angles_rad"), py::arg("counts"));
  m.def(
      "fit_decay",
      [](const std::vector<int> &n, const std::vector<double> &c) {
        return decay_dict(fit_decay(n, c));
      },
      py::arg("n_values"), py::arg("counts"));
  m.def("reconstruct", &reconstruct, py::arg("counts"),
        py::arg("projectors") = std::array<std::string, 4>{"H", "V", "D", "R"},
        py::arg("target") = std::nullopt, py::arg("mc_samples") = 0,
        py::arg("seed") = 0);
  m.def("budget", &budget, py::arg("fiber_length_m") = 0.5,
        py::arg("wavelength_nm") = 780.0, py::arg("inventory") = "improved",
        py::arg("delta_tau_ns") = std::nullopt, py::arg("n_max") = 20);
  m.def("loop_time_ns", &loop_time_ns, py::arg("fiber_length_m"));
  m.def(
      "run",
      [](const Scenario &s, const std::string &subcommand, const std::string &out_dir,
         const std::string &target) {
        const RunReport r = run(s, subcommand, target, out_dir);
        std::vector<std::string> files;
        for (const auto &f : r.files) files.push_back(f.string());
        return py::make_tuple(r.summary_json, files);
      },
      py::arg("scenario"), py::arg("subcommand"), py::arg("out_dir"),
      py::arg("target") = "");
}
