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

#ifndef AQCF_ESTIMATOR_HPP_
#define AQCF_ESTIMATOR_HPP_

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqcf/hamiltonian.hpp"
#include "aqcf/statevector.hpp"

namespace aqcf {

struct EnergyEstimate {
  double value = 0.0;
  double stderr_upper = 0.0;  // sqrt(sum_terms c^2 (1 - <P>^2) / kept)
  int shots_per_basis = 0;    // requested M
  double retention = 1.0;     // kept / requested, over all bases
  std::vector<int> kept_per_basis;
};

nlohmann::json to_json(const EnergyEstimate& e);

// Terms sharing one product basis: basis[q] is the axis measured on qubit q.
struct MeasurementGroup {
  std::vector<Axis> basis;
  std::vector<int> terms;  // indices into Hamiltonian::terms()
};

// Greedy qubit-wise-commuting grouping in term order. Identity terms are
// not measured. Heisenberg: X, Y, Z bases. Ising: X then Z.
std::vector<MeasurementGroup> measurement_groups(const Hamiltonian& h);

// Each basis gets M shots of the filtered circuit; with success
// probability p < 1 a Binomial(M, p) number of them survive post-selection
// and only those are used. Basis g draws from stream (seed, g).
EnergyEstimate estimate_energy_sampled(const StateVector& state, const Hamiltonian& h, int shots_per_basis,
                                       std::uint64_t seed, double success_probability = 1.0);

// |lambda - lambda_0| / |lambda_0|.
double relative_energy_error(double lambda, double lambda0);
// 1 - |<a|b>|^2.
double infidelity(const StateVector& state, const StateVector& target);
// 1 - sum_j |<v_j|state>|^2 over an orthonormal target subspace.
double infidelity(const StateVector& state, const std::vector<StateVector>& subspace);

}  // namespace aqcf

#endif  // AQCF_ESTIMATOR_HPP_
