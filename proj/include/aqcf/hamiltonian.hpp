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

#ifndef AQCF_HAMILTONIAN_HPP_
#define AQCF_HAMILTONIAN_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "aqcf/statevector.hpp"

namespace aqcf {

enum class ModelKind { kHeisenberg, kIsing, kCustom };
enum class Boundary { kPeriodic, kOpen };

std::string model_name(ModelKind m);
ModelKind model_from_name(const std::string& name);

// Heisenberg ring of length lx (ly = 1) or transverse-field Ising lattice
// lx by ly, periodic in both directions. Site index is x + lx * y.
struct ModelSpec {
  ModelKind kind = ModelKind::kHeisenberg;
  int lx = 8;
  int ly = 1;

  int num_sites() const { return lx * ly; }
  std::string label() const;  // "HM L=8", "TFIM 3x2"
  void validate() const;
};

struct PauliTerm {
  double coeff;
  PauliString paulis;
};

// Unordered pair of sites, stored in construction order. For the chain,
// `a` is the bond index k of the pair (k, k+1 mod L).
struct Bond {
  int a;
  int b;
  friend bool operator==(const Bond&, const Bond&) = default;
};

class Hamiltonian {
 public:
  Hamiltonian(int num_qubits, std::vector<PauliTerm> terms);
  Hamiltonian(int num_qubits, std::vector<PauliTerm> terms, ModelKind model,
              std::vector<int> dims, Boundary boundary, std::vector<Bond> bonds);

  int num_qubits() const { return num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  ModelKind model() const { return model_; }
  const std::vector<int>& dims() const { return dims_; }
  Boundary boundary() const { return boundary_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // out = H * in. `in` and `out` must not alias.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  StateVector apply(const StateVector& s) const;
  double expectation(const StateVector& s) const;

  // Dense matrix; refused above 14 qubits.
  Eigen::MatrixXcd dense() const;

  // scale * H + shift * 1, keeping the metadata. The shift is stored as an
  // identity term (empty PauliString).
  Hamiltonian affine(double scale, double shift) const;

  nlohmann::json to_json() const;
  static Hamiltonian from_json(const nlohmann::json& j);

 private:
  struct Compiled {
    std::uint64_t x_mask;
    std::uint64_t z_mask;
    cplx factor;  // coeff * i^{num_y}
  };
  void compile();

  int num_qubits_;
  std::vector<PauliTerm> terms_;
  ModelKind model_ = ModelKind::kCustom;
  std::vector<int> dims_;
  Boundary boundary_ = Boundary::kOpen;
  std::vector<Bond> bonds_;
  std::vector<Compiled> compiled_;
};

// Lattice structure, shared by the Hamiltonian builders and the product formulas.
std::vector<Bond> model_bonds(const ModelSpec& spec);
// Number of distinct bonds touching each site.
std::vector<int> site_degrees(const ModelSpec& spec);

Hamiltonian build_heisenberg_target(int length);
Hamiltonian build_heisenberg_init(int length);
Hamiltonian build_tfim_target(int lx, int ly);
Hamiltonian build_tfim_init(int lx, int ly);

Hamiltonian target_hamiltonian(const ModelSpec& spec);
Hamiltonian initial_hamiltonian(const ModelSpec& spec);
// (1 - s) * H_init + s * H_target, as a plain term list.
Hamiltonian interpolated_hamiltonian(const ModelSpec& spec, double s);

// Analytic ground state of the initial Hamiltonian: singlets on
// (2j, 2j+1) for the chain, |->^n for the Ising lattice.
StateVector initial_state(const ModelSpec& spec);
double initial_energy(const ModelSpec& spec);

struct EigenSolution {
  std::vector<double> values;      // ascending
  std::vector<StateVector> vectors;
  std::vector<double> residuals;   // ||H v - lambda v||
};

struct LanczosOptions {
  double tolerance = 1e-8;
  int max_matvecs = 5000;  // per eigenpair
  int krylov_dim = 120;    // capped by a 1 GiB basis budget
  std::uint64_t seed = 0x5eedULL;
};

// Lowest k eigenpairs via Lanczos with full reorthogonalization, locking
// one converged vector per pass. Degenerate copies are picked up by later
// passes because each restart is orthogonalized against the locked set.
EigenSolution lowest_eigenpairs(const Hamiltonian& h, int k, const LanczosOptions& opts = {});

// Dense diagonalization, used as the reference below ~12 qubits.
EigenSolution dense_eigenpairs(const Hamiltonian& h, int k);

struct SpectrumLevel {
  double energy;
  double fidelity;  // summed over the degenerate subspace
  int degeneracy;
};

// Levels closer than `degeneracy_tol` are merged.
std::vector<SpectrumLevel> fidelity_spectrum(const StateVector& s, const EigenSolution& eig,
                                             double degeneracy_tol = 1e-10);
std::vector<SpectrumLevel> fidelity_spectrum(const Hamiltonian& h, const StateVector& s, int k);

}  // namespace aqcf

#endif  // AQCF_HAMILTONIAN_HPP_
