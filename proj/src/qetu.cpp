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

#include "aqcf/qetu.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aqcf/errors.hpp"

namespace aqcf {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec = Eigen::VectorXcd;

// exp(i phi X) on the ancilla, i.e. a rotation by -2 phi.
void ancilla_rotation(StateVector& s, double phi) {
  s.apply_pauli_rotation(PauliString{{s.num_qubits() - 1, Axis::X}}, -2.0 * phi);
}

// Runs the full sequence and leaves the register before measurement. With
// `eigenbasis` set and a dense spectrum available, the register is returned
// in the system eigenbasis, which preserves both block norms.
StateVector run_sequence(const StateVector& input, const PhaseSequence& phases, const ControlledU& u,
                         bool eigenbasis) {
  phases.validate();
  if (input.num_qubits() != u.num_qubits()) throw ConfigError("filter: input size does not match the evolution");
  const std::size_t half = input.size();
  const DenseSpectrum* sp = u.spectrum();
  if (eigenbasis && sp != nullptr) {
    // Ancilla rotations commute with a change of system basis, so the whole
    // sequence runs in the eigenbasis where U is a diagonal phase.
    const Eigen::Index dim = static_cast<Eigen::Index>(half);
    const Vec c = sp->vectors.adjoint() * Eigen::Map<const Vec>(input.data().data(), dim);
    StateVector reg(input.num_qubits() + 1);
    std::copy(c.data(), c.data() + dim, reg.data().begin());
    const double scale = kPi / u.bounds().width();
    Vec ph(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      ph[k] = std::exp(cplx(0.0, -scale * (sp->values[k] - u.bounds().lambda_min)));
    }
    ancilla_rotation(reg, phases.phases[0]);
    for (int j = 1; j <= phases.eta(); ++j) {
      Eigen::Map<Vec> up(reg.data().data() + dim, dim);
      up = j % 2 == 0 ? Vec(up.cwiseProduct(ph.conjugate())) : Vec(up.cwiseProduct(ph));
      ancilla_rotation(reg, phases.phases[j]);
    }
    return reg;
  }
  StateVector reg = input.with_ancilla();
  std::span<cplx> upper = reg.data().subspan(half, half);
  ancilla_rotation(reg, phases.phases[0]);
  for (int j = 1; j <= phases.eta(); ++j) {
    u.apply(upper, /*adjoint=*/j % 2 == 0);
    ancilla_rotation(reg, phases.phases[j]);
  }
  return reg;
}

}  // namespace

void RescaleBounds::validate() const {
  if (!std::isfinite(lambda_min) || !std::isfinite(lambda_max) || !(lambda_min < lambda_max)) {
    throw ConfigError("rescale bounds: need finite lambda_min < lambda_max");
  }
}

double rescale(double lambda, const RescaleBounds& b) {
  b.validate();
  return kPi * (lambda - b.lambda_min) / b.width();
}

Hamiltonian rescale(const Hamiltonian& h, const RescaleBounds& b) {
  b.validate();
  return h.affine(kPi / b.width(), -kPi * b.lambda_min / b.width());
}

int qetu_trotter_steps(const RescaleBounds& b) {
  b.validate();
  // Guard against 31.4159...->32 style round-up from representation error.
  const double raw = kPi / (0.1 * b.width());
  return std::max(1, static_cast<int>(std::ceil(raw - 1e-12)));
}

std::string mode_name(EvolutionMode m) { return m == EvolutionMode::kExact ? "exact" : "trotter"; }

std::shared_ptr<const DenseSpectrum> dense_spectrum(const Hamiltonian& h) {
  if (h.num_qubits() > kDenseLimit) throw ConfigError("dense evolution refused above " + std::to_string(kDenseLimit) + " qubits");
  const Eigen::MatrixXcd m = h.dense();
  auto out = std::make_shared<DenseSpectrum>();
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success) throw NumericalError("dense eigen-solver failed");
    out->values = es.eigenvalues();
    out->vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigen-solver failed");
    out->values = es.eigenvalues();
    out->vectors = es.eigenvectors();
  }
  return out;
}

ControlledU ControlledU::exact(const Hamiltonian& h, const RescaleBounds& bounds,
                               std::shared_ptr<const DenseSpectrum> spectrum) {
  bounds.validate();
  ControlledU u;
  u.mode_ = EvolutionMode::kExact;
  u.num_qubits_ = h.num_qubits();
  u.bounds_ = bounds;
  if (spectrum) {
    if (spectrum->values.size() != (Eigen::Index{1} << h.num_qubits())) {
      throw ConfigError("dense spectrum does not match the Hamiltonian");
    }
    u.spectrum_ = std::move(spectrum);
  } else if (h.num_qubits() <= kDenseLimit) {
    u.spectrum_ = dense_spectrum(h);
  } else {
    u.scaled_ = std::make_shared<Hamiltonian>(rescale(h, bounds));
  }
  return u;
}

ControlledU ControlledU::trotterized(const ModelSpec& spec, const RescaleBounds& bounds) {
  bounds.validate();
  ControlledU u;
  u.mode_ = EvolutionMode::kTrotter;
  u.num_qubits_ = spec.num_sites();
  u.bounds_ = bounds;
  u.steps_ = qetu_trotter_steps(bounds);
  const double scale = kPi / bounds.width();
  const auto terms = scale_terms(local_terms(spec, 1.0), scale);
  u.plan_.order = 2;
  u.plan_.bonds = model_bonds(spec);
  u.plan_.groups = bond_groups(u.plan_.bonds);
  const auto step = build_step(2, terms, u.plan_.groups, 1.0 / u.steps_);
  for (int i = 0; i < u.steps_; ++i) append_layers(u.plan_.layers, step);
  u.plan_.global_phase = kPi * bounds.lambda_min / bounds.width();
  u.inverse_ = inverse_layers(u.plan_.layers);
  for (const auto& l : u.plan_.layers) {
    for (const auto& g : l.gates) u.forward_gates_.push_back(gate_matrix(g));
  }
  for (const auto& l : u.inverse_) {
    for (const auto& g : l.gates) u.inverse_gates_.push_back(gate_matrix(g));
  }
  return u;
}

void ControlledU::apply(std::span<cplx> block, bool adjoint) const {
  if (block.size() != (std::size_t{1} << num_qubits_)) throw ConfigError("evolution: block size mismatch");
  const double sign = adjoint ? -1.0 : 1.0;
  if (mode_ == EvolutionMode::kTrotter) {
    const auto& layers = adjoint ? inverse_ : plan_.layers;
    const auto& mats = adjoint ? inverse_gates_ : forward_gates_;
    std::size_t i = 0;
    for (const auto& l : layers) {
      for (const auto& g : l.gates) kernel::apply_2q(block, g.bond.a, g.bond.b, mats[i++]);
    }
    const cplx ph = std::exp(cplx(0.0, sign * plan_.global_phase));
    for (auto& a : block) a *= ph;
    return;
  }
  if (spectrum_) {
    Eigen::Map<Vec> v(block.data(), static_cast<Eigen::Index>(block.size()));
    Vec coeffs = spectrum_->vectors.adjoint() * v;
    const double scale = kPi / bounds_.width();
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
      const double lt = scale * (spectrum_->values[j] - bounds_.lambda_min);
      coeffs[j] *= std::exp(cplx(0.0, -sign * lt));
    }
    v = spectrum_->vectors * coeffs;
    return;
  }
  krylov_expm(*scaled_, block, sign * 1.0);
}

void krylov_expm(const Hamiltonian& h, std::span<cplx> v, double t, double tol) {
  const Eigen::Index dim = static_cast<Eigen::Index>(v.size());
  Eigen::Map<Vec> x(v.data(), dim);
  const double norm0 = x.norm();
  if (norm0 == 0.0 || t == 0.0) return;
  const Eigen::Index mmax = std::min<Eigen::Index>(40, dim);
  const double dir = t > 0 ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double dt = remaining;
  Vec w(dim), y(dim);
  while (remaining > 0.0) {
    Eigen::MatrixXcd basis(dim, mmax);
    std::vector<double> alpha, beta;
    basis.col(0) = x / norm0;
    Eigen::Index m = 0;
    double tail = 0.0;
    for (Eigen::Index j = 0; j < mmax; ++j) {
      Vec col = basis.col(j);
      h.apply({col.data(), static_cast<std::size_t>(dim)}, {y.data(), static_cast<std::size_t>(dim)});
      alpha.push_back(col.dot(y).real());
      w = y;
      for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
      m = j + 1;
      tail = w.norm();
      if (tail < 1e-13 || m == mmax) break;
      beta.push_back(tail);
      basis.col(j + 1) = w / tail;
    }
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const bool exact = tail < 1e-13;
    dt = std::min(dt, remaining);
    Vec coeff(m);
    for (int attempt = 0;; ++attempt) {
      Vec e(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        e[k] = std::exp(cplx(0.0, -dir * dt * tri.eigenvalues()[k])) * tri.eigenvectors()(0, k);
      }
      coeff = tri.eigenvectors().cast<cplx>() * e;
      const double err = exact ? 0.0 : tail * std::abs(coeff[m - 1]);
      if (err <= tol * dt / std::abs(t) || attempt > 60) break;
      dt *= 0.5;
    }
    x = norm0 * (basis.leftCols(m) * coeff);
    remaining -= dt;
    if (remaining < 1e-15 * std::abs(t)) remaining = 0.0;
  }
}

FilterResult apply_qetu(const StateVector& input, const PhaseSequence& phases, const ControlledU& u) {
  const StateVector reg = run_sequence(input, phases, u, /*eigenbasis=*/false);
  try {
    Projection p = project_qubit(reg, reg.num_qubits() - 1, 0);
    return {std::move(p.state), p.probability};
  } catch (const PostSelectionError& e) {
    throw PostSelectionError("filter: success probability below 1e-14, state filtered to nothing",
                             e.probability());
  }
}

double qetu_success_probability(const StateVector& input, const PhaseSequence& phases, const ControlledU& u) {
  const StateVector reg = run_sequence(input, phases, u, /*eigenbasis=*/true);
  double p = 0.0;
  for (std::size_t b = 0; b < input.size(); ++b) p += std::norm(reg[b]);
  return p;
}

GateTally count_filter_gates(const ModelSpec& spec, const RescaleBounds& bounds, int eta) {
  if (eta < 0) throw ConfigError("filter: eta must be >= 0");
  GateTally t;
  t.breakdown["filter_slots"] = 0;
  t.breakdown["filter_boundary"] = 0;
  if (eta == 0) return t;
  const ControlledU u = ControlledU::trotterized(spec, bounds);
  const auto& layers = u.plan().layers;
  std::int64_t per_slot = 2 * static_cast<std::int64_t>(spec.num_sites());
  for (const auto& l : layers) per_slot += layer_cost(l);
  const std::int64_t facing = layer_cost(layers.front()) + layer_cost(layers.back());
  t.breakdown["filter_slots"] = eta * per_slot;
  t.breakdown["filter_boundary"] = -(eta - 1) * facing;
  t.native_two_qubit = t.breakdown["filter_slots"] + t.breakdown["filter_boundary"];
  return t;
}

GateTally count_filter_gates(const QetuCircuit& c) { return count_filter_gates(c.model, c.bounds, c.eta()); }

nlohmann::json circuit_summary(const QetuCircuit& c) {
  return {{"eta", c.eta()},
          {"mu", c.mu},
          {"bounds", {c.bounds.lambda_min, c.bounds.lambda_max}},
          {"S_q", c.trotter_steps},
          {"mode", mode_name(c.mode)},
          {"tally", to_json(count_filter_gates(c))}};
}

}  // namespace aqcf
