// Copyright 2026 The aqcf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Thin Python surface: models are passed as (kind, lx, ly), states as
// complex NumPy arrays, structured results as JSON text or dicts.

#include <complex>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aqcf/errors.hpp"
#include "aqcf/estimator.hpp"
#include "aqcf/hamiltonian.hpp"
#include "aqcf/pipeline.hpp"
#include "aqcf/qetu.hpp"
#include "aqcf/qsp.hpp"
#include "aqcf/trotter.hpp"

namespace py = pybind11;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

aqcf::ModelSpec model(const std::string& kind, int lx, int ly) {
  aqcf::ModelSpec m;
  m.kind = aqcf::model_from_name(kind);
  m.lx = lx;
  m.ly = ly;
  m.validate();
  return m;
}

CArray to_numpy(const aqcf::StateVector& s) {
  CArray out(static_cast<py::ssize_t>(s.size()));
  auto d = s.data();
  std::copy(d.begin(), d.end(), out.mutable_data());
  return out;
}

aqcf::StateVector from_numpy(const CArray& a) {
  if (a.ndim() != 1) throw aqcf::ConfigError("state must be a 1-D array");
  const auto n = static_cast<std::size_t>(a.size());
  if (n == 0 || (n & (n - 1)) != 0) throw aqcf::ConfigError("state length must be a power of two");
  int q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  return aqcf::StateVector(q, std::vector<aqcf::cplx>(a.data(), a.data() + n));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adiabatic state preparation with eigenstate filtering (C++ core)";

  py::register_exception<aqcf::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<aqcf::NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<aqcf::ProfilingInconclusive>(m, "ProfilingInconclusive", PyExc_RuntimeError);

  m.def(
      "hamiltonian_json",
      [](const std::string& kind, int lx, int ly) { return aqcf::target_hamiltonian(model(kind, lx, ly)).to_json().dump(); },
      py::arg("kind"), py::arg("lx"), py::arg("ly") = 1, "Target Hamiltonian as JSON text.");

  m.def(
      "lowest_energies",
      [](const std::string& kind, int lx, int ly, int k) {
        return aqcf::lowest_eigenpairs(aqcf::target_hamiltonian(model(kind, lx, ly)), k).values;
      },
      py::arg("kind"), py::arg("lx"), py::arg("ly") = 1, py::arg("k") = 1);

  m.def(
      "initial_state",
      [](const std::string& kind, int lx, int ly) { return to_numpy(aqcf::initial_state(model(kind, lx, ly))); },
      py::arg("kind"), py::arg("lx"), py::arg("ly") = 1);

  m.def(
      "energy",
      [](const CArray& state, const std::string& kind, int lx, int ly) {
        return aqcf::target_hamiltonian(model(kind, lx, ly)).expectation(from_numpy(state));
      },
      py::arg("state"), py::arg("kind"), py::arg("lx"), py::arg("ly") = 1, "<psi|H_targ|psi>.");

  m.def(
      "run_aqc",
      [](const std::string& kind, int lx, int ly, double total_time, int steps_per_unit, int order) {
        const auto spec = model(kind, lx, ly);
        if (order == 0) order = spec.kind == aqcf::ModelKind::kHeisenberg ? 4 : 2;
        return to_numpy(aqcf::run_adiabatic(aqcf::initial_state(spec), {total_time, steps_per_unit}, spec, order));
      },
      py::arg("kind"), py::arg("lx"), py::arg("ly") = 1, py::arg("total_time") = 5.0, py::arg("steps_per_unit") = 3,
      py::arg("order") = 0, "Adiabatically prepared state; order 0 picks the model default.");

  m.def(
      "aqc_gate_count",
      [](const std::string& kind, int lx, int ly, double total_time, int steps_per_unit, int order) {
        const auto spec = model(kind, lx, ly);
        if (order == 0) order = spec.kind == aqcf::ModelKind::kHeisenberg ? 4 : 2;
        return aqcf::count_native_two_qubit(aqcf::adiabatic_plan(spec, {total_time, steps_per_unit}, order))
            .native_two_qubit;
      },
      py::arg("kind"), py::arg("lx"), py::arg("ly") = 1, py::arg("total_time") = 5.0, py::arg("steps_per_unit") = 3,
      py::arg("order") = 0);

  m.def(
      "filter_gate_count",
      [](const std::string& kind, int lx, int ly, double lambda_min, double lambda_max, int eta) {
        return aqcf::count_filter_gates(model(kind, lx, ly), {lambda_min, lambda_max}, eta).native_two_qubit;
      },
      py::arg("kind"), py::arg("lx"), py::arg("ly"), py::arg("lambda_min"), py::arg("lambda_max"), py::arg("eta"));

  m.def(
      "design_phases",
      [](int eta, double mu, double width) {
        aqcf::FilterSpec spec{eta, mu, width};
        return aqcf::to_json(aqcf::build_phase_table(spec)).dump();
      },
      py::arg("eta") = 4, py::arg("mu") = 0.8, py::arg("width") = -1.0, "Phase table as JSON text.");

  m.def(
      "evaluate_filter",
      [](const std::vector<double>& phases, double x) { return aqcf::evaluate_filter(aqcf::PhaseSequence{phases}, x); },
      py::arg("phases"), py::arg("x"), "F(x) of the scalar filter model.");

  m.def(
      "apply_filter",
      [](const CArray& state, const std::vector<double>& phases, const std::string& kind, int lx, int ly,
         double lambda_min, double lambda_max, bool exact) {
        const auto spec = model(kind, lx, ly);
        const aqcf::RescaleBounds b{lambda_min, lambda_max};
        const auto u = exact ? aqcf::ControlledU::exact(aqcf::target_hamiltonian(spec), b)
                             : aqcf::ControlledU::trotterized(spec, b);
        auto r = aqcf::apply_qetu(from_numpy(state), aqcf::PhaseSequence{phases}, u);
        return py::make_tuple(to_numpy(r.post_selected), r.success_probability);
      },
      py::arg("state"), py::arg("phases"), py::arg("kind"), py::arg("lx"), py::arg("ly"), py::arg("lambda_min"),
      py::arg("lambda_max"), py::arg("exact") = true, "(post-selected state, success probability).");

  m.def(
      "estimate_energy",
      [](const CArray& state, const std::string& kind, int lx, int ly, int shots, std::uint64_t seed, double p) {
        const auto est = aqcf::estimate_energy_sampled(from_numpy(state),
                                                       aqcf::target_hamiltonian(model(kind, lx, ly)), shots, seed, p);
        return aqcf::to_json(est).dump();
      },
      py::arg("state"), py::arg("kind"), py::arg("lx"), py::arg("ly"), py::arg("shots"), py::arg("seed"),
      py::arg("success_probability") = 1.0, "EnergyEstimate as JSON text.");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw aqcf::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        const auto cfg = aqcf::ExperimentConfig::from_json(j);
        py::gil_scoped_release release;
        return aqcf::to_json(aqcf::run_experiment(cfg)).dump();
      },
      py::arg("config_json"), "Runs an experiment; returns the record as JSON text.");
}
