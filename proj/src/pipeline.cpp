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

#include "aqcf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "aqcf/errors.hpp"
#include "aqcf/rng.hpp"

namespace aqcf {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": key '" + key + "' has the wrong type");
  }
}

std::vector<double> parse_times(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of evolution times");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(where + ": evolution times must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Array of values, or {"from", "to", "step"}.
std::vector<double> parse_grid(const json& j, const std::string& where) {
  if (j.is_array()) return parse_times(j, where);
  check_keys(j, {"from", "to", "step"}, where);
  if (!j.contains("from") || !j.contains("to") || !j.contains("step")) {
    throw ConfigError(where + ": grid object needs from, to and step");
  }
  return make_grid(get_or<double>(j, "from", 0.0, where), get_or<double>(j, "to", 0.0, where),
                   get_or<double>(j, "step", 0.0, where));
}

ModelSpec parse_model(const json& j) {
  check_keys(j, {"kind", "lx", "ly", "L"}, "model");
  ModelSpec m;
  m.kind = model_from_name(get_or<std::string>(j, "kind", "heisenberg", "model"));
  if (m.kind == ModelKind::kCustom) throw ConfigError("model: custom Hamiltonians have no adiabatic path");
  m.lx = get_or<int>(j, "lx", get_or<int>(j, "L", m.kind == ModelKind::kHeisenberg ? 8 : 3, "model"), "model");
  m.ly = get_or<int>(j, "ly", m.kind == ModelKind::kHeisenberg ? 1 : 2, "model");
  m.validate();
  return m;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json scan_to_json(const ScanResult& s) {
  json pts = json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"lambda", p.lambda},
                   {"p_hat", p.p_hat},
                   {"stderr", p.stderr_},
                   {"p_exact", p.p_exact ? json(*p.p_exact) : json()}});
  }
  return {{"shots", s.shots}, {"points", pts}};
}

}  // namespace

int ExperimentConfig::resolved_order() const {
  if (order != 0) return order;
  return model.kind == ModelKind::kHeisenberg ? 4 : 2;
}

void ExperimentConfig::validate() const {
  model.validate();
  if (model.kind == ModelKind::kCustom) throw ConfigError("config: custom Hamiltonians have no adiabatic path");
  if (model.num_sites() > kMaxQubits - 1) throw ConfigError("config: more qubits than the simulator supports");
  if (model.num_sites() > kMaxQubitsUnforced && !force) {
    throw ConfigError("config: " + std::to_string(model.num_sites()) +
                      " qubits exceeds the 22-qubit guardrail; pass --force to run anyway");
  }
  if (t_aqc.empty() && t_aqcf.empty()) throw ConfigError("config: no evolution times given");
  for (const auto* list : {&t_aqc, &t_aqcf}) {
    for (double t : *list) AdiabaticSchedule{t, steps_per_unit}.validate();
  }
  if (steps_per_unit < 1) throw ConfigError("config: steps_per_unit must be >= 1");
  const int o = resolved_order();
  if (o != 2 && o != 4) throw ConfigError("config: order must be 2 or 4");
  filter.validate();
  if (phases && phases_file) throw ConfigError("config: give inline phases or a phase file, not both");
  if (phases) PhaseSequence{*phases}.validate();
  if (bounds) bounds->validate();
  if (bounds && spectrum_bounds) throw ConfigError("config: give explicit bounds or from_spectrum, not both");
  if (spectrum_bounds) {
    if (spectrum_bounds->eigenpairs < 1) throw ConfigError("config: from_spectrum eigenpairs must be >= 1");
    if (!(spectrum_bounds->spacing > 0.0) ||
        !(spectrum_bounds->threshold > 0.0 && spectrum_bounds->threshold < 1.0)) {
      throw ConfigError("config: from_spectrum needs spacing > 0 and 0 < threshold < 1");
    }
  }
  if (profiling.total_time <= 0.0) throw ConfigError("config: profiling time must be positive");
  profiling.scans.filter.validate();
  if (profiling.scans.shots < 0) throw ConfigError("config: profiling shots must be >= 0");
  if (shots < 0) throw ConfigError("config: shots must be >= 0");
  if (eigenpairs < 1) throw ConfigError("config: eigenpairs must be >= 1");
  if (metric != "energy" && metric != "infidelity") throw ConfigError("config: metric must be energy or infidelity");
  if (out_dir.empty()) throw ConfigError("config: out_dir is empty");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j, {"model", "T", "steps_per_unit", "order", "filter", "bounds", "profiling", "u_mode", "shots", "seed",
                 "eigenpairs", "metric", "out_dir", "force"},
             "config");
  ExperimentConfig c;
  if (j.contains("model")) c.model = parse_model(j.at("model"));
  if (j.contains("T")) {
    const json& t = j.at("T");
    if (t.is_array()) {
      c.t_aqc = c.t_aqcf = parse_times(t, "T");
    } else {
      check_keys(t, {"AQC", "AQC+F"}, "T");
      if (t.contains("AQC")) c.t_aqc = parse_times(t.at("AQC"), "T.AQC");
      if (t.contains("AQC+F")) c.t_aqcf = parse_times(t.at("AQC+F"), "T.AQC+F");
    }
  } else {
    c.t_aqc = c.t_aqcf = {3, 4, 5, 7, 9};
  }
  c.steps_per_unit = get_or<int>(j, "steps_per_unit", c.steps_per_unit, "config");
  c.order = get_or<int>(j, "order", c.order, "config");
  if (j.contains("filter")) {
    const json& f = j.at("filter");
    check_keys(f, {"eta", "mu", "width", "phases", "phases_file"}, "filter");
    c.filter.eta = get_or<int>(f, "eta", c.filter.eta, "filter");
    c.filter.mu = get_or<double>(f, "mu", c.filter.mu, "filter");
    c.filter.width = get_or<double>(f, "width", c.filter.width, "filter");
    if (f.contains("phases") && !f.at("phases").is_null()) c.phases = parse_times(f.at("phases"), "filter.phases");
    if (f.contains("phases_file") && !f.at("phases_file").is_null()) {
      c.phases_file = get_or<std::string>(f, "phases_file", "", "filter");
    }
  }
  if (j.contains("bounds") && j.at("bounds").is_object() && j.at("bounds").contains("from_spectrum")) {
    const json& b = j.at("bounds");
    check_keys(b, {"from_spectrum"}, "bounds");
    const json& fs = b.at("from_spectrum");
    check_keys(fs, {"threshold", "spacing", "eigenpairs"}, "bounds.from_spectrum");
    SpectrumBoundsSpec sb;
    sb.threshold = get_or<double>(fs, "threshold", sb.threshold, "bounds.from_spectrum");
    sb.spacing = get_or<double>(fs, "spacing", sb.spacing, "bounds.from_spectrum");
    sb.eigenpairs = get_or<int>(fs, "eigenpairs", sb.eigenpairs, "bounds.from_spectrum");
    c.spectrum_bounds = sb;
  } else if (j.contains("bounds") && !j.at("bounds").is_null()) {
    const json& b = j.at("bounds");
    check_keys(b, {"lambda_min", "lambda_max"}, "bounds");
    if (!b.contains("lambda_min") || !b.contains("lambda_max")) {
      throw ConfigError("bounds: need lambda_min and lambda_max");
    }
    c.bounds = RescaleBounds{get_or<double>(b, "lambda_min", 0.0, "bounds"),
                             get_or<double>(b, "lambda_max", 0.0, "bounds")};
  }
  c.profiling.scans = ProfileConfig::defaults_for(c.model);
  c.profiling.scans.shots = 0;
  if (j.contains("profiling")) {
    const json& p = j.at("profiling");
    check_keys(p, {"T", "eta", "mu", "width", "lower_grid", "lower_fixed_max", "upper_grid", "shots"}, "profiling");
    auto& s = c.profiling.scans;
    c.profiling.total_time = get_or<double>(p, "T", c.profiling.total_time, "profiling");
    s.filter.eta = get_or<int>(p, "eta", s.filter.eta, "profiling");
    s.filter.mu = get_or<double>(p, "mu", s.filter.mu, "profiling");
    s.filter.width = get_or<double>(p, "width", s.filter.width, "profiling");
    if (p.contains("lower_grid")) s.lower_grid = parse_grid(p.at("lower_grid"), "profiling.lower_grid");
    if (p.contains("upper_grid")) s.upper_grid = parse_grid(p.at("upper_grid"), "profiling.upper_grid");
    s.lower_fixed_max = get_or<double>(p, "lower_fixed_max", s.lower_fixed_max, "profiling");
    s.shots = get_or<int>(p, "shots", s.shots, "profiling");
  }
  const std::string mode = get_or<std::string>(j, "u_mode", "trotter", "config");
  if (mode == "trotter") {
    c.u_mode = EvolutionMode::kTrotter;
  } else if (mode == "exact") {
    c.u_mode = EvolutionMode::kExact;
  } else {
    throw ConfigError("config: u_mode must be trotter or exact");
  }
  c.shots = get_or<int>(j, "shots", c.shots, "config");
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "config");
  c.eigenpairs = get_or<int>(j, "eigenpairs", c.eigenpairs, "config");
  c.metric = get_or<std::string>(j, "metric", c.metric, "config");
  c.out_dir = get_or<std::string>(j, "out_dir", c.out_dir, "config");
  c.force = get_or<bool>(j, "force", c.force, "config");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["model"] = {{"kind", model_name(model.kind)}, {"lx", model.lx}, {"ly", model.ly}};
  j["T"] = {{"AQC", t_aqc}, {"AQC+F", t_aqcf}};
  j["steps_per_unit"] = steps_per_unit;
  j["order"] = resolved_order();
  json f = {{"eta", filter.eta}, {"mu", filter.mu}, {"width", filter.transition_width()}};
  if (phases) f["phases"] = *phases;
  if (phases_file) f["phases_file"] = *phases_file;
  j["filter"] = f;
  if (spectrum_bounds) {
    j["bounds"] = {{"from_spectrum",
                    {{"threshold", spectrum_bounds->threshold},
                     {"spacing", spectrum_bounds->spacing},
                     {"eigenpairs", spectrum_bounds->eigenpairs}}}};
  } else {
    j["bounds"] = bounds ? json{{"lambda_min", bounds->lambda_min}, {"lambda_max", bounds->lambda_max}} : json();
  }
  const auto& s = profiling.scans;
  j["profiling"] = {{"T", profiling.total_time},
                    {"eta", s.filter.eta},
                    {"mu", s.filter.mu},
                    {"width", s.filter.transition_width()},
                    {"lower_grid", s.lower_grid},
                    {"lower_fixed_max", s.lower_fixed_max},
                    {"upper_grid", s.upper_grid},
                    {"shots", s.shots}};
  j["u_mode"] = mode_name(u_mode);
  j["shots"] = shots;
  j["seed"] = seed;
  j["eigenpairs"] = eigenpairs;
  j["metric"] = metric;
  j["out_dir"] = out_dir;
  j["force"] = force;
  return j;
}

PhaseTable resolve_phase_table(const ExperimentConfig& cfg) {
  if (cfg.phases) {
    PhaseTable t;
    t.phases = PhaseSequence{*cfg.phases};
    t.phases.validate();
    t.spec = cfg.filter;
    t.spec.eta = t.phases.eta();
    t.residual = 0.0;
    return t;
  }
  if (cfg.phases_file) {
    std::ifstream in(*cfg.phases_file);
    if (!in) throw ConfigError("phase table: cannot open " + *cfg.phases_file);
    try {
      return phase_table_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw ConfigError("phase table: invalid JSON: " + std::string(e.what()));
    }
  }
  return build_phase_table(cfg.filter);
}

GateTally aqc_gate_tally(const ExperimentConfig& cfg, double total_time) {
  return count_native_two_qubit(
      adiabatic_plan(cfg.model, AdiabaticSchedule{total_time, cfg.steps_per_unit}, cfg.resolved_order()));
}

RescaleBounds spectrum_bounds_for(const ExperimentConfig& cfg, const Hamiltonian& h) {
  if (!cfg.spectrum_bounds) throw ConfigError("config: from_spectrum bounds not requested");
  const int cap = static_cast<int>(std::min<std::uint64_t>(std::uint64_t{1} << h.num_qubits(), 1u << 20));
  const EigenSolution eig = lowest_eigenpairs(h, std::min(cfg.spectrum_bounds->eigenpairs, cap));
  const StateVector input = run_adiabatic(initial_state(cfg.model),
                                          AdiabaticSchedule{cfg.profiling.total_time, cfg.steps_per_unit}, cfg.model,
                                          cfg.resolved_order());
  return bounds_from_spectrum(input, eig, *cfg.spectrum_bounds);
}

ProfileResult run_profiling(const ExperimentConfig& cfg) {
  const StateVector input = run_adiabatic(initial_state(cfg.model),
                                          AdiabaticSchedule{cfg.profiling.total_time, cfg.steps_per_unit}, cfg.model,
                                          cfg.resolved_order());
  ProfileConfig scans = cfg.profiling.scans;
  scans.seed = cfg.seed;
  const ScanContext ctx = ScanContext::make(cfg.model, scans.filter, cfg.u_mode);
  return profile_spectrum(input, ctx, scans);
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentRecord r;
  r.config = cfg;
  const Hamiltonian h = target_hamiltonian(cfg.model);
  const int dim_cap = static_cast<int>(std::min<std::uint64_t>(std::uint64_t{1} << cfg.model.num_sites(), 1u << 20));
  const EigenSolution eig = lowest_eigenpairs(h, std::min(cfg.eigenpairs, dim_cap));
  r.eigenvalues = eig.values;
  r.ground_energy = eig.values.front();
  std::vector<StateVector> ground;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] - r.ground_energy <= 1e-9 * std::max(1.0, std::abs(r.ground_energy))) {
      ground.push_back(eig.vectors[i]);
    }
  }
  r.ground_degeneracy = static_cast<int>(ground.size());

  const StateVector init = initial_state(cfg.model);
  std::map<double, StateVector> aqc_states;
  auto aqc_state = [&](double t) -> const StateVector& {
    auto it = aqc_states.find(t);
    if (it == aqc_states.end()) {
      it = aqc_states
               .emplace(t, run_adiabatic(init, AdiabaticSchedule{t, cfg.steps_per_unit}, cfg.model,
                                         cfg.resolved_order()))
               .first;
    }
    return it->second;
  };

  const Rng row_seeds(cfg.seed, 4);
  // `state` must be normalized. Post-selection and normalize() share one
  // arithmetic path, so a zero-phase filter reproduces AQC bit for bit.
  auto finish_row = [&](ExperimentRow row, const StateVector& state) {
    row.energy = h.expectation(state);
    row.rel_energy_error = relative_energy_error(row.energy, r.ground_energy);
    row.infidelity = infidelity(state, ground);
    if (cfg.shots > 0) {
      const std::uint64_t s = row_seeds.split(r.rows.size()).next_u64();
      row.estimate = estimate_energy_sampled(state, h, cfg.shots, s, row.success_probability);
    }
    r.rows.push_back(std::move(row));
  };

  for (double t : cfg.t_aqc) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.method = "AQC";
    row.total_time = t;
    row.gates = aqc_gate_tally(cfg, t).native_two_qubit;
    StateVector psi = aqc_state(t);
    psi.normalize();
    row.wall_seconds = wall_since(t0);
    finish_row(std::move(row), psi);
  }

  if (!cfg.t_aqcf.empty()) {
    const PhaseTable table = resolve_phase_table(cfg);
    r.phases = table;
    if (cfg.bounds) {
      r.bounds = cfg.bounds;
    } else if (cfg.spectrum_bounds) {
      r.bounds = spectrum_bounds_for(cfg, h);
    } else {
      r.profile = run_profiling(cfg);
      r.bounds = RescaleBounds{r.profile->lambda_lb, r.profile->lambda_ub};
    }
    r.filter_tally = count_filter_gates(cfg.model, *r.bounds, table.phases.eta());
    const ControlledU u = cfg.u_mode == EvolutionMode::kExact ? ControlledU::exact(h, *r.bounds)
                                                              : ControlledU::trotterized(cfg.model, *r.bounds);
    for (double t : cfg.t_aqcf) {
      const auto t0 = std::chrono::steady_clock::now();
      ExperimentRow row;
      row.method = "AQC+F";
      row.total_time = t;
      row.gates = aqc_gate_tally(cfg, t).native_two_qubit + r.filter_tally.native_two_qubit;
      FilterResult f = apply_qetu(aqc_state(t), table.phases, u);
      row.success_probability = f.success_probability;
      row.wall_seconds = wall_since(t0);
      finish_row(std::move(row), f.post_selected);
    }
  }
  return r;
}

json to_json(const ExperimentRecord& r) {
  json j;
  j["config"] = r.config.to_json();
  j["eigenvalues"] = r.eigenvalues;
  j["ground_energy"] = r.ground_energy;
  j["ground_degeneracy"] = r.ground_degeneracy;
  j["bounds"] = r.bounds ? json{{"lambda_min", r.bounds->lambda_min}, {"lambda_max", r.bounds->lambda_max}} : json();
  if (r.profile) {
    j["profile"] = {{"lambda_lb", r.profile->lambda_lb},
                    {"lambda_ub", r.profile->lambda_ub},
                    {"lower", scan_to_json(r.profile->lower)},
                    {"upper", scan_to_json(r.profile->upper)}};
  } else {
    j["profile"] = nullptr;
  }
  j["phases"] = r.phases ? to_json(*r.phases) : json();
  j["filter_tally"] = to_json(r.filter_tally);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"method", row.method},
                    {"T", row.total_time},
                    {"gates", row.gates},
                    {"energy", row.energy},
                    {"rel_energy_error", row.rel_energy_error},
                    {"infidelity", row.infidelity},
                    {"success_probability", row.success_probability},
                    {"estimate", row.estimate ? to_json(*row.estimate) : json()}});
  }
  j["rows"] = rows;
  return j;
}

std::string rows_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  os << "method,T,gates,energy,rel_energy_error,infidelity,success_probability,retention,energy_sampled,"
        "stderr_upper,shots_per_basis\n";
  for (const auto& row : r.rows) {
    os << row.method << ',' << fmt(row.total_time) << ',' << row.gates << ',' << fmt(row.energy) << ','
       << fmt(row.rel_energy_error) << ',' << fmt(row.infidelity) << ',' << fmt(row.success_probability) << ',';
    if (row.estimate) {
      os << fmt(row.estimate->retention) << ',' << fmt(row.estimate->value) << ','
         << fmt(row.estimate->stderr_upper) << ',' << row.estimate->shots_per_basis;
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

std::string plot_csv(const ExperimentRecord& r) {
  const bool energy = r.config.metric == "energy";
  std::ostringstream os;
  os << "method,gates," << (energy ? "rel_energy_error" : "infidelity") << '\n';
  for (const auto& row : r.rows) {
    os << row.method << ',' << row.gates << ',' << fmt(energy ? row.rel_energy_error : row.infidelity) << '\n';
  }
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

void write_outputs(const ExperimentRecord& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_text(dir / "record.json", to_json(r).dump(2) + "\n");
  write_text(dir / "records.csv", rows_csv(r));
  write_text(dir / ("plot_" + r.config.metric + ".csv"), plot_csv(r));
  write_text(dir / "hamiltonian.json", target_hamiltonian(r.config.model).to_json().dump(2) + "\n");
  if (r.phases) write_text(dir / "phases.json", to_json(*r.phases).dump(2) + "\n");
  if (r.phases && r.bounds) {
    QetuCircuit c;
    c.phases = r.phases->phases;
    c.bounds = *r.bounds;
    c.mode = r.config.u_mode;
    c.trotter_steps = qetu_trotter_steps(*r.bounds);
    c.mu = r.phases->spec.mu;
    c.model = r.config.model;
    write_text(dir / "circuit.json", circuit_summary(c).dump(2) + "\n");
  }
  if (r.profile) {
    write_text(dir / "profile_lower.csv", r.profile->lower.to_csv());
    write_text(dir / "profile_upper.csv", r.profile->upper.to_csv());
  }
  std::ostringstream timing;
  timing << "method,T,wall_seconds\n";
  for (const auto& row : r.rows) timing << row.method << ',' << fmt(row.total_time) << ',' << row.wall_seconds << '\n';
  write_text(dir / "timing.csv", timing.str());
}

}  // namespace aqcf
