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

// Command-line front end. Exit codes: 0 ok, 2 configuration error,
// 3 numerical failure, 4 inconclusive profiling.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "aqcf/errors.hpp"
#include "aqcf/hamiltonian.hpp"
#include "aqcf/pipeline.hpp"
#include "aqcf/profiling.hpp"
#include "aqcf/qetu.hpp"
#include "aqcf/qsp.hpp"
#include "aqcf/trotter.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool exact_u = false;
  bool trotter_u = false;
  std::optional<int> shots;
  bool force = false;
  bool dump_config = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "Experiment configuration (JSON)");
  app->add_option("--seed", f.seed, "Seed for every random stream");
  app->add_option("--out-dir", f.out_dir, "Output directory");
  auto* ex = app->add_flag("--exact-u", f.exact_u, "Exact controlled time evolution in the filter");
  auto* tr = app->add_flag("--trotter-u", f.trotter_u, "Second-order product formula in the filter");
  ex->excludes(tr);
  app->add_option("--shots", f.shots, "Shots per basis (run) or per grid point (profile); 0 = exact");
  app->add_flag("--force", f.force, "Allow more than 22 qubits");
  app->add_flag("--dump-config", f.dump_config, "Print the resolved configuration and exit");
}

// `shots_target` chooses what --shots overrides.
enum class ShotsTarget { kEnergy, kProfiling };

aqcf::ExperimentConfig resolve(const CommonFlags& f, ShotsTarget target) {
  aqcf::ExperimentConfig c = f.config.empty() ? aqcf::ExperimentConfig::from_json(json::object())
                                              : aqcf::ExperimentConfig::load(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.exact_u) c.u_mode = aqcf::EvolutionMode::kExact;
  if (f.trotter_u) c.u_mode = aqcf::EvolutionMode::kTrotter;
  if (f.shots) {
    if (target == ShotsTarget::kEnergy) {
      c.shots = *f.shots;
    } else {
      c.profiling.scans.shots = *f.shots;
    }
  }
  if (f.force) c.force = true;
  c.validate();
  return c;
}

bool dump_if_asked(const CommonFlags& f, const aqcf::ExperimentConfig& c) {
  if (!f.dump_config) return false;
  std::cout << c.to_json().dump(2) << '\n';
  return true;
}

int cmd_run(const CommonFlags& f) {
  const auto cfg = resolve(f, ShotsTarget::kEnergy);
  if (dump_if_asked(f, cfg)) return 0;
  const auto record = aqcf::run_experiment(cfg);
  aqcf::write_outputs(record, cfg.out_dir);
  std::cout << aqcf::rows_csv(record);
  return 0;
}

int cmd_profile(const CommonFlags& f) {
  const auto cfg = resolve(f, ShotsTarget::kProfiling);
  if (dump_if_asked(f, cfg)) return 0;
  const auto prof = aqcf::run_profiling(cfg);
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  aqcf::write_text(dir / "profile_lower.csv", prof.lower.to_csv());
  aqcf::write_text(dir / "profile_upper.csv", prof.upper.to_csv());
  const json bounds = {{"lambda_min", prof.lambda_lb}, {"lambda_max", prof.lambda_ub}};
  aqcf::write_text(dir / "bounds.json", bounds.dump(2) + "\n");
  std::cout << bounds.dump() << '\n';
  return 0;
}

int cmd_phases(const CommonFlags& f, const aqcf::FilterSpec& flags, bool eta_set, bool mu_set, bool width_set,
               const std::string& verify) {
  auto cfg = resolve(f, ShotsTarget::kEnergy);
  if (eta_set) cfg.filter.eta = flags.eta;
  if (mu_set) cfg.filter.mu = flags.mu;
  if (width_set) cfg.filter.width = flags.width;
  cfg.validate();
  if (dump_if_asked(f, cfg)) return 0;
  if (!verify.empty()) {
    std::ifstream in(verify);
    if (!in) throw aqcf::ConfigError("cannot open " + verify);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw aqcf::ConfigError(verify + " is not valid JSON: " + e.what());
    }
    const aqcf::PhaseTable table = aqcf::phase_table_from_json(j);
    const auto design = aqcf::design_step_polynomial(table.spec);
    const double res = aqcf::round_trip_residual(table.phases, design.poly);
    std::cout << json{{"file", verify}, {"round_trip_residual", res}}.dump() << '\n';
    if (!(res <= 1e-8)) throw aqcf::SolverError("imported phases do not reproduce the designed filter", res);
    return 0;
  }
  const aqcf::PhaseTable table = aqcf::build_phase_table(cfg.filter);
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  const std::string text = aqcf::to_json(table).dump(2) + "\n";
  aqcf::write_text(dir / "phases.json", text);
  std::cout << text;
  return 0;
}

int cmd_spectrum(const CommonFlags& f, std::optional<double> t) {
  const auto cfg = resolve(f, ShotsTarget::kEnergy);
  if (dump_if_asked(f, cfg)) return 0;
  const double total = t.value_or(cfg.profiling.total_time);
  const aqcf::Hamiltonian h = aqcf::target_hamiltonian(cfg.model);
  const auto eig = aqcf::lowest_eigenpairs(h, cfg.eigenpairs);
  const auto psi = aqcf::run_adiabatic(aqcf::initial_state(cfg.model),
                                       aqcf::AdiabaticSchedule{total, cfg.steps_per_unit}, cfg.model,
                                       cfg.resolved_order());
  const auto levels = aqcf::fidelity_spectrum(psi, eig);
  std::ostringstream csv;
  csv << "energy,fidelity,degeneracy\n";
  json jl = json::array();
  for (const auto& l : levels) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%d\n", l.energy, l.fidelity, l.degeneracy);
    csv << buf;
    jl.push_back({{"energy", l.energy}, {"fidelity", l.fidelity}, {"degeneracy", l.degeneracy}});
  }
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  aqcf::write_text(dir / "spectrum.csv", csv.str());
  aqcf::write_text(dir / "spectrum.json",
                   json{{"model", cfg.model.label()}, {"T", total}, {"eigenvalues", eig.values}, {"levels", jl}}
                           .dump(2) +
                       "\n");
  std::cout << csv.str();
  return 0;
}

int cmd_count_gates(const CommonFlags& f) {
  const auto cfg = resolve(f, ShotsTarget::kEnergy);
  if (dump_if_asked(f, cfg)) return 0;
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  json out;
  out["model"] = cfg.model.label();
  out["order"] = cfg.resolved_order();
  out["steps_per_unit"] = cfg.steps_per_unit;
  json aqc = json::array();
  for (double t : cfg.t_aqc) {
    aqc.push_back({{"T", t}, {"tally", aqcf::to_json(aqcf::aqc_gate_tally(cfg, t))}});
  }
  out["AQC"] = aqc;
  if (!cfg.t_aqc.empty()) {
    const auto plan = aqcf::adiabatic_plan(cfg.model, aqcf::AdiabaticSchedule{cfg.t_aqc.front(), cfg.steps_per_unit},
                                           cfg.resolved_order());
    aqcf::write_text(dir / "aqc_plan.json", aqcf::plan_to_json(plan).dump(2) + "\n");
  }
  if (!cfg.t_aqcf.empty()) {
    aqcf::RescaleBounds b{0.0, 1.0};
    if (cfg.bounds) {
      b = *cfg.bounds;
    } else if (cfg.spectrum_bounds) {
      b = aqcf::spectrum_bounds_for(cfg, aqcf::target_hamiltonian(cfg.model));
    } else {
      const auto prof = aqcf::run_profiling(cfg);
      b = {prof.lambda_lb, prof.lambda_ub};
    }
    const int eta = cfg.phases ? static_cast<int>(cfg.phases->size()) - 1 : cfg.filter.eta;
    const auto filter = aqcf::count_filter_gates(cfg.model, b, eta);
    out["bounds"] = {b.lambda_min, b.lambda_max};
    out["S_q"] = aqcf::qetu_trotter_steps(b);
    out["filter"] = aqcf::to_json(filter);
    json aqcf_rows = json::array();
    for (double t : cfg.t_aqcf) {
      auto tally = aqcf::aqc_gate_tally(cfg, t);
      tally += filter;
      aqcf_rows.push_back({{"T", t}, {"tally", aqcf::to_json(tally)}});
    }
    out["AQC+F"] = aqcf_rows;
    aqcf::write_text(dir / "filter_u_plan.json",
                     aqcf::plan_to_json(aqcf::ControlledU::trotterized(cfg.model, b).plan()).dump(2) + "\n");
  }
  const std::string text = out.dump(2) + "\n";
  aqcf::write_text(dir / "gates.json", text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic state preparation with eigenstate filtering"};
  app.require_subcommand(1);

  CommonFlags run_f, prof_f, ph_f, sp_f, cg_f;
  auto* run = app.add_subcommand("run", "AQC and AQC+F over the configured evolution times");
  add_common(run, run_f);
  auto* prof = app.add_subcommand("profile", "Spectral profiling of the AQC state");
  add_common(prof, prof_f);
  auto* ph = app.add_subcommand("phases", "Design, export or verify a filter phase table");
  add_common(ph, ph_f);
  aqcf::FilterSpec ph_spec;
  std::string verify;
  auto* eta_opt = ph->add_option("--eta", ph_spec.eta, "Number of controlled-U slots (even)");
  auto* mu_opt = ph->add_option("--mu", ph_spec.mu, "Cutoff in x = cos(l/2)");
  auto* width_opt = ph->add_option("--width", ph_spec.width, "Half-width of the transition band");
  ph->add_option("--verify", verify, "Phase table to check against its designed polynomial");
  auto* sp = app.add_subcommand("spectrum", "Fidelity spectrum of the AQC state");
  add_common(sp, sp_f);
  std::optional<double> sp_t;
  sp->add_option("--T", sp_t, "Adiabatic time (default: the profiling time)");
  auto* cg = app.add_subcommand("count-gates", "Two-qubit gate tallies and product-formula plans");
  add_common(cg, cg_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_f);
    if (*prof) return cmd_profile(prof_f);
    if (*ph) return cmd_phases(ph_f, ph_spec, eta_opt->count() > 0, mu_opt->count() > 0, width_opt->count() > 0,
                               verify);
    if (*sp) return cmd_spectrum(sp_f, sp_t);
    if (*cg) return cmd_count_gates(cg_f);
  } catch (const aqcf::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const aqcf::ProfilingInconclusive& e) {
    std::cerr << "profiling inconclusive: " << e.what() << '\n';
    return 4;
  } catch (const aqcf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
