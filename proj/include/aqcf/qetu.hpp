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

// Filter circuit on system + one ancilla (highest qubit index).
//
// With the ancilla on top, the ancilla-|1> amplitudes are the upper half of
// the register, so a controlled U is U applied to that contiguous block.

#ifndef AQCF_QETU_HPP_
#define AQCF_QETU_HPP_

#include <memory>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "aqcf/hamiltonian.hpp"
#include "aqcf/qsp.hpp"
#include "aqcf/statevector.hpp"
#include "aqcf/trotter.hpp"

namespace aqcf {

struct RescaleBounds {
  double lambda_min;
  double lambda_max;

  void validate() const;
  double width() const { return lambda_max - lambda_min; }
};

// pi (lambda - lambda_min) / (lambda_max - lambda_min).
double rescale(double lambda, const RescaleBounds& bounds);
Hamiltonian rescale(const Hamiltonian& h, const RescaleBounds& bounds);

// ceil(pi / (0.1 (lambda_max - lambda_min))).
int qetu_trotter_steps(const RescaleBounds& bounds);

enum class EvolutionMode { kExact, kTrotter };
std::string mode_name(EvolutionMode m);

// Eigendecomposition of a target Hamiltonian, shared across bounds.
struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};
inline constexpr int kDenseLimit = 10;
std::shared_ptr<const DenseSpectrum> dense_spectrum(const Hamiltonian& h);

// U = exp(-i H~) on a system-sized block, or its adjoint.
class ControlledU {
 public:
  // Dense when a spectrum is given or n <= kDenseLimit; Krylov otherwise.
  static ControlledU exact(const Hamiltonian& h, const RescaleBounds& bounds,
                           std::shared_ptr<const DenseSpectrum> spectrum = nullptr);
  // S_q second-order steps of the rescaled local terms (s = 1), times the
  // global phase exp(i pi lambda_min / width) from the identity shift.
  static ControlledU trotterized(const ModelSpec& spec, const RescaleBounds& bounds);

  void apply(std::span<cplx> block, bool adjoint) const;

  EvolutionMode mode() const { return mode_; }
  int num_qubits() const { return num_qubits_; }
  const RescaleBounds& bounds() const { return bounds_; }
  int trotter_steps() const { return plan_.layers.empty() ? 0 : steps_; }
  const TrotterPlan& plan() const { return plan_; }
  // Set for the dense exact path.
  const DenseSpectrum* spectrum() const { return spectrum_.get(); }

 private:
  ControlledU() = default;

  EvolutionMode mode_ = EvolutionMode::kExact;
  int num_qubits_ = 0;
  RescaleBounds bounds_{0.0, 1.0};
  std::shared_ptr<const DenseSpectrum> spectrum_;
  std::shared_ptr<const Hamiltonian> scaled_;  // Krylov path
  TrotterPlan plan_;
  std::vector<Layer> inverse_;
  std::vector<Eigen::Matrix4cd> forward_gates_, inverse_gates_;
  int steps_ = 0;
};

// exp(-i t H) v by restarted Lanczos, accurate to ~`tol` in vector norm.
void krylov_expm(const Hamiltonian& h, std::span<cplx> v, double t, double tol = 1e-10);

struct QetuCircuit {
  PhaseSequence phases;
  RescaleBounds bounds;
  EvolutionMode mode = EvolutionMode::kTrotter;
  int trotter_steps = 0;  // S_q
  double mu = 0.8;
  ModelSpec model;

  int eta() const { return phases.eta(); }
};

struct FilterResult {
  StateVector post_selected;
  double success_probability;
};

// Throws PostSelectionError below 1e-14.
FilterResult apply_qetu(const StateVector& input, const PhaseSequence& phases, const ControlledU& u);
// ||F(H~) input||^2 without forming the post-selected state.
double qetu_success_probability(const StateVector& input, const PhaseSequence& phases, const ControlledU& u);

// Control-free accounting: each slot costs its merged product-formula layers
// plus 2 n_sys controlled-Pauli gates; at each of the eta - 1 slot
// boundaries the two facing outer half-step layers cancel.
GateTally count_filter_gates(const ModelSpec& spec, const RescaleBounds& bounds, int eta);
GateTally count_filter_gates(const QetuCircuit& circuit);

nlohmann::json circuit_summary(const QetuCircuit& circuit);

}  // namespace aqcf

#endif  // AQCF_QETU_HPP_
