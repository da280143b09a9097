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

// End-to-end experiments: AQC and AQC+F over a list of evolution times,
// with profiling, gate accounting and file export.

#ifndef AQCF_PIPELINE_HPP_
#define AQCF_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqcf/estimator.hpp"
#include "aqcf/hamiltonian.hpp"
#include "aqcf/profiling.hpp"
#include "aqcf/qetu.hpp"
#include "aqcf/qsp.hpp"
#include "aqcf/trotter.hpp"

namespace aqcf {

inline constexpr int kMaxQubitsUnforced = 22;

struct ProfilingSettings {
  double total_time = 5.0;  // adiabatic time of the profiled input state
  ProfileConfig scans;
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<double> t_aqc;   // empty: method not run
  std::vector<double> t_aqcf;
  int steps_per_unit = 3;
  int order = 0;  // 0: 4 for Heisenberg, 2 for Ising
  FilterSpec filter{4, 0.8};
  std::optional<std::vector<double>> phases;  // overrides the designed filter
  std::optional<std::string> phases_file;
  std::optional<RescaleBounds> bounds;  // skips profiling when set
  std::optional<SpectrumBoundsSpec> spectrum_bounds;  // bounds from the exact spectrum instead of scans
  ProfilingSettings profiling;
  EvolutionMode u_mode = EvolutionMode::kTrotter;
  int shots = 0;  // per measurement basis; 0: exact expectation only
  std::uint64_t seed = 1;
  int eigenpairs = 8;
  std::string metric = "energy";  // y column of the plot data: energy | infidelity
  std::string out_dir = "out";
  bool force = false;

  int resolved_order() const;
  // Throws ConfigError; also enforces the qubit guardrail.
  void validate() const;

  // Unknown keys and wrong types are ConfigError. Missing keys take the
  // defaults above; profiling grids default per model.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

struct ExperimentRow {
  std::string method;  // "AQC" or "AQC+F"
  double total_time = 0.0;
  std::int64_t gates = 0;
  double energy = 0.0;  // exact <H>
  double rel_energy_error = 0.0;
  double infidelity = 0.0;
  double success_probability = 1.0;
  std::optional<EnergyEstimate> estimate;
  double wall_seconds = 0.0;  // not part of the deterministic outputs
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<double> eigenvalues;  // lowest `eigenpairs` of H_targ
  double ground_energy = 0.0;
  int ground_degeneracy = 1;
  std::optional<RescaleBounds> bounds;
  std::optional<ProfileResult> profile;
  std::optional<PhaseTable> phases;
  GateTally filter_tally;
  std::vector<ExperimentRow> rows;
};

// Phase table the filter stage uses: inline phases, a file, or the
// designed polynomial for config.filter.
PhaseTable resolve_phase_table(const ExperimentConfig& cfg);

// AQC gate count for one evolution time.
GateTally aqc_gate_tally(const ExperimentConfig& cfg, double total_time);

// bounds_from_spectrum for the AQC state at cfg.profiling.total_time.
RescaleBounds spectrum_bounds_for(const ExperimentConfig& cfg, const Hamiltonian& h);

// Profiles the AQC state at cfg.profiling.total_time.
ProfileResult run_profiling(const ExperimentConfig& cfg);

ExperimentRecord run_experiment(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentRecord& r);  // no wall times
// One row per (method, T); columns listed in the header line.
std::string rows_csv(const ExperimentRecord& r);
// method,gates,<metric>: x = two-qubit gate count, y = chosen metric.
std::string plot_csv(const ExperimentRecord& r);

// Writes record.json, records.csv, plot_<metric>.csv, hamiltonian.json
// and, when the filter ran, phases.json, circuit.json and the profiling
// scans. Wall times go to timing.csv, the only non-reproducible file.
void write_outputs(const ExperimentRecord& r, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace aqcf

#endif  // AQCF_PIPELINE_HPP_
