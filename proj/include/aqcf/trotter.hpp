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

// Product-formula digitization of the adiabatic path.
//
// A bond gate is exp(-i t G) for a two-qubit Hermitian G and is applied as
// an exact 4x4 unitary. Layers hold gates of one commuting bond group;
// appending a layer of the same group as the previous one fuses the two.

#ifndef AQCF_TROTTER_HPP_
#define AQCF_TROTTER_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqcf/hamiltonian.hpp"
#include "aqcf/statevector.hpp"

namespace aqcf {

// sin^2(pi t / 2T).
double path_value(double t, double total_time);

struct AdiabaticSchedule {
  double total_time = 0.0;
  int steps_per_unit = 3;

  void validate() const;
  int num_steps() const;
  double tau() const { return 1.0 / steps_per_unit; }
  // s(j * tau) for step j = 1..num_steps().
  double s_at_step(int j) const;
};

struct LocalTerm {
  Bond bond;
  std::vector<PauliTerm> terms;
};

// c (XX + YY + ZZ), c = 1 on even bond index k = bond.a and c = s on odd.
LocalTerm local_term_hm(const Bond& bond, double s);
// -s ZZ + X_a / deg_a + X_b / deg_b.
LocalTerm local_term_tfim(const Bond& bond, double s, int deg_a, int deg_b);
// One local term per lattice bond, in model_bonds order.
std::vector<LocalTerm> local_terms(const ModelSpec& spec, double s);
std::vector<LocalTerm> scale_terms(std::vector<LocalTerm> terms, double factor);

// Greedy edge coloring in bond order. Entries index into `bonds`.
std::vector<std::vector<int>> bond_groups(const std::vector<Bond>& bonds);

// exp(-i * time * generator).
struct GateFactor {
  std::vector<PauliTerm> generator;
  double time;
};

struct BondGate {
  Bond bond;
  std::vector<GateFactor> factors;  // applied in order
};

struct Layer {
  int group;
  std::vector<BondGate> gates;
};

inline constexpr double kFourthOrderU = 0.41449077179437573;  // 1 / (4 - 4^{1/3})

struct TrotterPlan {
  int order = 2;
  double u = 0.0;  // set for order 4
  std::vector<Bond> bonds;
  std::vector<std::vector<int>> groups;
  std::vector<Layer> layers;
  double global_phase = 0.0;  // whole circuit multiplied by exp(i * global_phase)
};

// Appends `next` to `layers`, fusing the junction when the groups match.
void append_layers(std::vector<Layer>& layers, const std::vector<Layer>& next);

// One step of length tau. Order 2: groups forward at tau/2, then backward
// at tau/2. Order 4: five order-2 steps at (u, u, 1-4u, u, u) * tau.
std::vector<Layer> build_step(int order, const std::vector<LocalTerm>& terms,
                              const std::vector<std::vector<int>>& groups, double tau);

TrotterPlan adiabatic_plan(const ModelSpec& spec, const AdiabaticSchedule& schedule, int order);

// 4x4 unitary of a gate; local index bit(bond.a) + 2 bit(bond.b).
Eigen::Matrix4cd gate_matrix(const BondGate& gate);

void apply_layers(std::span<cplx> amps, const std::vector<Layer>& layers);
void apply_plan(StateVector& state, const TrotterPlan& plan);
// Reversed layers and factors with negated times.
std::vector<Layer> inverse_layers(const std::vector<Layer>& layers);

StateVector run_adiabatic(const StateVector& initial, const AdiabaticSchedule& schedule,
                          const ModelSpec& spec, int order);

struct GateTally {
  std::int64_t native_two_qubit = 0;
  std::map<std::string, std::int64_t> breakdown;

  GateTally& operator+=(const GateTally& other);
};

// Distinct two-qubit Pauli pairs in the generators: 3 for a Heisenberg
// bond, 1 for an Ising bond. Single-qubit content is free.
int bond_gate_cost(const BondGate& gate);
std::int64_t layer_cost(const Layer& layer);
GateTally count_native_two_qubit(const std::vector<Layer>& layers, const std::string& stage = "circuit");
GateTally count_native_two_qubit(const TrotterPlan& plan, const std::string& stage = "aqc");

nlohmann::json to_json(const GateTally& tally);
nlohmann::json plan_to_json(const TrotterPlan& plan);

}  // namespace aqcf

#endif  // AQCF_TROTTER_HPP_
