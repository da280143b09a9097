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

#include "aqcf/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "aqcf/errors.hpp"

namespace aqcf {

namespace {

PauliString pair_string(const Bond& b, Axis axis) { return PauliString{{b.a, axis}, {b.b, axis}}; }

bool same_generator(const std::vector<PauliTerm>& x, const std::vector<PauliTerm>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].coeff != y[i].coeff || !(x[i].paulis == y[i].paulis)) return false;
  }
  return true;
}

// Rewrites a term on (bond.a, bond.b) onto local qubits (0, 1).
PauliString localize(const PauliString& p, const Bond& bond) {
  PauliString out;
  for (auto [q, a] : p.ops()) {
    if (q == bond.a) out.set(0, a);
    else if (q == bond.b) out.set(1, a);
    else throw ConfigError("bond gate term acts outside its bond");
  }
  return out;
}

Eigen::Matrix4cd generator_matrix(const std::vector<PauliTerm>& gen, const Bond& bond) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (const auto& t : gen) {
    const PauliString p = localize(t.paulis, bond);
    for (int c = 0; c < 4; ++c) {
      cplx col[4] = {0, 0, 0, 0};
      col[c] = 1.0;
      kernel::apply_pauli(std::span<cplx>(col, 4), p);
      for (int r = 0; r < 4; ++r) m(r, c) += t.coeff * col[r];
    }
  }
  return m;
}

Layer make_layer(int group, const std::vector<int>& members, const std::vector<LocalTerm>& terms,
                 double time) {
  Layer layer{group, {}};
  for (int idx : members) layer.gates.push_back({terms[idx].bond, {{terms[idx].terms, time}}});
  return layer;
}

}  // namespace

double path_value(double t, double total_time) {
  if (!(total_time > 0.0)) throw ConfigError("path: total time must be positive");
  if (t < -1e-12 || t > total_time * (1.0 + 1e-12)) throw ConfigError("path: t outside [0, T]");
  const double s = std::sin(std::numbers::pi * t / (2.0 * total_time));
  return s * s;
}

void AdiabaticSchedule::validate() const {
  if (steps_per_unit < 1) throw ConfigError("schedule: steps per unit time must be >= 1");
  if (!(total_time >= 0.0)) throw ConfigError("schedule: total time must be >= 0");
  const double steps = total_time * steps_per_unit;
  if (std::abs(steps - std::round(steps)) >= 1e-9) {
    throw ConfigError("schedule: S*T must be an integer");
  }
}

int AdiabaticSchedule::num_steps() const {
  validate();
  return static_cast<int>(std::lround(total_time * steps_per_unit));
}

double AdiabaticSchedule::s_at_step(int j) const {
  // j / S is exact for the last step, so s(T) = 1 exactly.
  if (j == num_steps()) return 1.0;
  return path_value(static_cast<double>(j) / steps_per_unit, total_time);
}

LocalTerm local_term_hm(const Bond& bond, double s) {
  const double c = (bond.a % 2 == 0) ? 1.0 : s;
  LocalTerm t{bond, {}};
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) t.terms.push_back({c, pair_string(bond, a)});
  return t;
}

LocalTerm local_term_tfim(const Bond& bond, double s, int deg_a, int deg_b) {
  if (deg_a < 1 || deg_b < 1) throw ConfigError("tfim local term: site degree must be >= 1");
  LocalTerm t{bond, {}};
  t.terms.push_back({-s, pair_string(bond, Axis::Z)});
  t.terms.push_back({1.0 / deg_a, PauliString{{bond.a, Axis::X}}});
  t.terms.push_back({1.0 / deg_b, PauliString{{bond.b, Axis::X}}});
  return t;
}

std::vector<LocalTerm> local_terms(const ModelSpec& spec, double s) {
  std::vector<LocalTerm> out;
  const auto bonds = model_bonds(spec);
  if (spec.kind == ModelKind::kHeisenberg) {
    for (const auto& b : bonds) out.push_back(local_term_hm(b, s));
  } else {
    const auto deg = site_degrees(spec);
    for (const auto& b : bonds) out.push_back(local_term_tfim(b, s, deg[b.a], deg[b.b]));
  }
  return out;
}

std::vector<LocalTerm> scale_terms(std::vector<LocalTerm> terms, double factor) {
  for (auto& lt : terms) {
    for (auto& t : lt.terms) t.coeff *= factor;
  }
  return terms;
}

std::vector<std::vector<int>> bond_groups(const std::vector<Bond>& bonds) {
  std::vector<std::vector<int>> groups;
  std::vector<std::set<int>> used;
  for (int i = 0; i < static_cast<int>(bonds.size()); ++i) {
    const Bond& b = bonds[i];
    std::size_t g = 0;
    while (g < groups.size() && (used[g].count(b.a) || used[g].count(b.b))) ++g;
    if (g == groups.size()) {
      groups.emplace_back();
      used.emplace_back();
    }
    groups[g].push_back(i);
    used[g].insert(b.a);
    used[g].insert(b.b);
  }
  return groups;
}

void append_layers(std::vector<Layer>& layers, const std::vector<Layer>& next) {
  for (const auto& layer : next) {
    if (layer.gates.empty()) continue;
    if (layers.empty() || layers.back().group != layer.group) {
      layers.push_back(layer);
      continue;
    }
    Layer& last = layers.back();
    for (const auto& gate : layer.gates) {
      auto it = std::find_if(last.gates.begin(), last.gates.end(),
                             [&](const BondGate& g) { return g.bond == gate.bond; });
      if (it == last.gates.end()) {
        last.gates.push_back(gate);
        continue;
      }
      for (const auto& f : gate.factors) {
        if (!it->factors.empty() && same_generator(it->factors.back().generator, f.generator)) {
          it->factors.back().time += f.time;
        } else {
          it->factors.push_back(f);
        }
      }
    }
  }
}

std::vector<Layer> build_step(int order, const std::vector<LocalTerm>& terms,
                              const std::vector<std::vector<int>>& groups, double tau) {
  // The middle fourth-order substep runs backwards, so tau < 0 is legal.
  if (!std::isfinite(tau) || tau == 0.0) throw ConfigError("trotter step: tau must be finite and nonzero");
  std::vector<Layer> out;
  if (order == 2) {
    const int g = static_cast<int>(groups.size());
    for (int i = 0; i < g; ++i) append_layers(out, {make_layer(i, groups[i], terms, 0.5 * tau)});
    for (int i = g - 1; i >= 0; --i) append_layers(out, {make_layer(i, groups[i], terms, 0.5 * tau)});
    return out;
  }
  if (order == 4) {
    const double u = kFourthOrderU;
    for (double c : {u, u, 1.0 - 4.0 * u, u, u}) append_layers(out, build_step(2, terms, groups, c * tau));
    return out;
  }
  throw ConfigError("trotter order must be 2 or 4");
}

TrotterPlan adiabatic_plan(const ModelSpec& spec, const AdiabaticSchedule& schedule, int order) {
  if (order != 2 && order != 4) throw ConfigError("trotter order must be 2 or 4");
  TrotterPlan plan;
  plan.order = order;
  plan.u = order == 4 ? kFourthOrderU : 0.0;
  plan.bonds = model_bonds(spec);
  plan.groups = bond_groups(plan.bonds);
  const int steps = schedule.num_steps();
  for (int j = 1; j <= steps; ++j) {
    append_layers(plan.layers, build_step(order, local_terms(spec, schedule.s_at_step(j)), plan.groups,
                                          schedule.tau()));
  }
  return plan;
}

Eigen::Matrix4cd gate_matrix(const BondGate& gate) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  for (const auto& f : gate.factors) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(generator_matrix(f.generator, gate.bond));
    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i) phases[i] = std::exp(cplx(0.0, -f.time * es.eigenvalues()[i]));
    u = (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * u).eval();
  }
  return u;
}

void apply_layers(std::span<cplx> amps, const std::vector<Layer>& layers) {
  for (const auto& layer : layers) {
    for (const auto& gate : layer.gates) kernel::apply_2q(amps, gate.bond.a, gate.bond.b, gate_matrix(gate));
  }
}

void apply_plan(StateVector& state, const TrotterPlan& plan) {
  apply_layers(state.data(), plan.layers);
  if (plan.global_phase != 0.0) {
    const cplx ph = std::exp(cplx(0.0, plan.global_phase));
    for (auto& a : state.data()) a *= ph;
  }
}

std::vector<Layer> inverse_layers(const std::vector<Layer>& layers) {
  std::vector<Layer> out(layers.rbegin(), layers.rend());
  for (auto& layer : out) {
    for (auto& gate : layer.gates) {
      std::reverse(gate.factors.begin(), gate.factors.end());
      for (auto& f : gate.factors) f.time = -f.time;
    }
  }
  return out;
}

StateVector run_adiabatic(const StateVector& initial, const AdiabaticSchedule& schedule, const ModelSpec& spec,
                          int order) {
  if (initial.num_qubits() != spec.num_sites()) throw ConfigError("adiabatic run: state size does not match model");
  StateVector state = initial;
  apply_plan(state, adiabatic_plan(spec, schedule, order));
  return state;
}

GateTally& GateTally::operator+=(const GateTally& other) {
  native_two_qubit += other.native_two_qubit;
  for (const auto& [k, v] : other.breakdown) breakdown[k] += v;
  return *this;
}

int bond_gate_cost(const BondGate& gate) {
  std::set<PauliString> pairs;
  for (const auto& f : gate.factors) {
    for (const auto& t : f.generator) {
      if (t.paulis.weight() == 2 && t.coeff != 0.0) pairs.insert(t.paulis);
    }
  }
  return static_cast<int>(pairs.size());
}

std::int64_t layer_cost(const Layer& layer) {
  std::int64_t c = 0;
  for (const auto& g : layer.gates) c += bond_gate_cost(g);
  return c;
}

GateTally count_native_two_qubit(const std::vector<Layer>& layers, const std::string& stage) {
  GateTally t;
  for (const auto& l : layers) t.native_two_qubit += layer_cost(l);
  t.breakdown[stage] = t.native_two_qubit;
  return t;
}

GateTally count_native_two_qubit(const TrotterPlan& plan, const std::string& stage) {
  return count_native_two_qubit(plan.layers, stage);
}

nlohmann::json to_json(const GateTally& tally) {
  return {{"native_two_qubit", tally.native_two_qubit}, {"breakdown", tally.breakdown}};
}

nlohmann::json plan_to_json(const TrotterPlan& plan) {
  nlohmann::json bonds = nlohmann::json::array();
  for (const auto& b : plan.bonds) bonds.push_back({b.a, b.b});
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : plan.layers) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : layer.gates) {
      nlohmann::json factors = nlohmann::json::array();
      for (const auto& f : g.factors) {
        nlohmann::json rotations = nlohmann::json::array();
        bool commuting = true;
        for (std::size_t i = 0; i < f.generator.size(); ++i) {
          for (std::size_t j = 0; j < i; ++j) {
            commuting = commuting && f.generator[i].paulis.commutes_with(f.generator[j].paulis);
          }
          rotations.push_back({{"pauli", f.generator[i].paulis.str()}, {"angle", 2.0 * f.time * f.generator[i].coeff}});
        }
        factors.push_back({{"time", f.time}, {"commuting", commuting}, {"rotations", rotations}});
      }
      gates.push_back({{"qubits", {g.bond.a, g.bond.b}}, {"cost", bond_gate_cost(g)}, {"factors", factors}});
    }
    layers.push_back({{"group", layer.group}, {"gates", gates}});
  }
  return {{"order", plan.order},     {"u", plan.u},           {"bonds", bonds},
          {"groups", plan.groups},   {"global_phase", plan.global_phase},
          {"native_two_qubit", count_native_two_qubit(plan).native_two_qubit},
          {"layers", layers}};
}

}  // namespace aqcf
