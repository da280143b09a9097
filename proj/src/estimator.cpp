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

#include "aqcf/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "aqcf/errors.hpp"
#include "aqcf/rng.hpp"

namespace aqcf {

nlohmann::json to_json(const EnergyEstimate& e) {
  return {{"value", e.value},
          {"stderr_upper", e.stderr_upper},
          {"shots_per_basis", e.shots_per_basis},
          {"retention", e.retention},
          {"kept_per_basis", e.kept_per_basis}};
}

std::vector<MeasurementGroup> measurement_groups(const Hamiltonian& h) {
  std::vector<MeasurementGroup> groups;
  std::vector<std::vector<int>> assigned;  // 0 = free, else Axis value
  const int n = h.num_qubits();
  for (int t = 0; t < static_cast<int>(h.terms().size()); ++t) {
    const auto& p = h.terms()[t].paulis;
    if (p.empty()) continue;
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      bool ok = true;
      for (auto [q, a] : p.ops()) {
        const int cur = assigned[g][q];
        if (cur != 0 && cur != static_cast<int>(a)) ok = false;
      }
      if (ok) break;
    }
    if (g == groups.size()) {
      groups.push_back({std::vector<Axis>(n, Axis::Z), {}});
      assigned.emplace_back(n, 0);
    }
    for (auto [q, a] : p.ops()) {
      assigned[g][q] = static_cast<int>(a);
      groups[g].basis[q] = a;
    }
    groups[g].terms.push_back(t);
  }
  return groups;
}

EnergyEstimate estimate_energy_sampled(const StateVector& state, const Hamiltonian& h, int shots_per_basis,
                                       std::uint64_t seed, double success_probability) {
  if (shots_per_basis < 1) throw ConfigError("estimator: shots per basis must be >= 1");
  if (!(success_probability > 0.0 && success_probability <= 1.0)) {
    throw ConfigError("estimator: success probability must lie in (0, 1]");
  }
  if (state.num_qubits() != h.num_qubits()) throw ConfigError("estimator: state and Hamiltonian sizes differ");
  EnergyEstimate est;
  est.shots_per_basis = shots_per_basis;
  for (const auto& t : h.terms()) {
    if (t.paulis.empty()) est.value += t.coeff;
  }
  const Rng base(seed, 3);
  double variance = 0.0;
  std::int64_t kept_total = 0;
  const auto groups = measurement_groups(h);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Rng rng = base.split(g);
    const int kept = success_probability < 1.0
                         ? static_cast<int>(rng.binomial(shots_per_basis, success_probability))
                         : shots_per_basis;
    est.kept_per_basis.push_back(kept);
    kept_total += kept;
    if (kept == 0) throw PostSelectionError("estimator: no shots survived post-selection", success_probability);
    const auto outcomes = sample_indices(state, groups[g].basis, kept, rng);
    for (int ti : groups[g].terms) {
      const auto& term = h.terms()[ti];
      // Outcome bit 1 means eigenvalue -1 on that qubit.
      const std::uint64_t support = term.paulis.x_mask() | term.paulis.z_mask();
      std::int64_t acc = 0;
      for (auto b : outcomes) acc += (std::popcount(b & support) & 1) ? -1 : 1;
      const double mean = static_cast<double>(acc) / kept;
      est.value += term.coeff * mean;
      variance += term.coeff * term.coeff * (1.0 - mean * mean) / kept;
    }
  }
  est.stderr_upper = std::sqrt(std::max(0.0, variance));
  est.retention = groups.empty() ? 1.0
                                 : static_cast<double>(kept_total) /
                                       (static_cast<double>(shots_per_basis) * static_cast<double>(groups.size()));
  return est;
}

double relative_energy_error(double lambda, double lambda0) {
  if (lambda0 == 0.0) throw ConfigError("relative energy error: reference energy is zero");
  return std::abs(lambda - lambda0) / std::abs(lambda0);
}

double infidelity(const StateVector& state, const StateVector& target) {
  return std::clamp(1.0 - fidelity(state, target), 0.0, 1.0);
}

double infidelity(const StateVector& state, const std::vector<StateVector>& subspace) {
  double f = 0.0;
  for (const auto& v : subspace) f += fidelity(v, state);
  return std::clamp(1.0 - f, 0.0, 1.0);
}

}  // namespace aqcf
