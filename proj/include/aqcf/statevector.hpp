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

// Dense statevector kernel.
//
// Bit order: qubit q is bit q of the basis index (qubit 0 is the LSB).
// Bitstrings are written qubit-first, so character k is the value of
// qubit k: "011" on three qubits is index 0b110 = 6.
// Rotations follow exp(-i * angle * P / 2).

#ifndef AQCF_STATEVECTOR_HPP_
#define AQCF_STATEVECTOR_HPP_

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aqcf/rng.hpp"

namespace aqcf {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 30;

enum class Axis : std::uint8_t { X = 1, Y = 2, Z = 3 };

char axis_char(Axis a);
Axis axis_from_char(char c);

// Tensor product of single-qubit Paulis; identity on unlisted qubits.
// ops() is kept sorted by qubit index.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::initializer_list<std::pair<int, Axis>> ops);

  // Accepts "X0 Y3" or "X0Y3" (axis letter followed by qubit index).
  static PauliString parse(std::string_view text);

  void set(int qubit, Axis axis);

  const std::vector<std::pair<int, Axis>>& ops() const { return ops_; }
  bool empty() const { return ops_.empty(); }
  std::size_t weight() const { return ops_.size(); }
  int max_qubit() const { return ops_.empty() ? -1 : ops_.back().first; }

  // Qubits carrying X or Y.
  std::uint64_t x_mask() const;
  // Qubits carrying Y or Z.
  std::uint64_t z_mask() const;
  int num_y() const;

  bool commutes_with(const PauliString& other) const;
  std::string str() const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.ops_ == b.ops_;
  }
  friend bool operator<(const PauliString& a, const PauliString& b) {
    return a.ops_ < b.ops_;
  }

 private:
  std::vector<std::pair<int, Axis>> ops_;
};

namespace kernel {

// Span-level primitives. `amps` holds 2^num_qubits amplitudes; callers may
// pass a sub-block of a larger register (e.g. the ancilla-|1> half).
void apply_pauli(std::span<cplx> amps, const PauliString& p);
void apply_pauli_rotation(std::span<cplx> amps, const PauliString& p,
                          double angle);
void apply_1q(std::span<cplx> amps, int q, const Eigen::Matrix2cd& u);
// Local index of the 4x4 matrix is bit(q0) + 2 * bit(q1).
void apply_2q(std::span<cplx> amps, int q0, int q1, const Eigen::Matrix4cd& u);
cplx expectation(std::span<const cplx> amps, const PauliString& p);

}  // namespace kernel

class StateVector {
 public:
  // |0...0> on n qubits.
  explicit StateVector(int num_qubits);
  // Takes ownership; the length must be 2^num_qubits. No normalization.
  StateVector(int num_qubits, std::vector<cplx> amplitudes);

  // Computational basis state from a qubit-first bitstring.
  static StateVector basis(int num_qubits, std::string_view bits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<cplx> data() { return amps_; }
  std::span<const cplx> data() const { return amps_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

  void apply_pauli(const PauliString& p);
  void apply_pauli_rotation(const PauliString& p, double angle);
  void apply_1q(int q, const Eigen::Matrix2cd& u);
  void apply_2q(int q0, int q1, const Eigen::Matrix4cd& u);

  double expectation(const PauliString& p) const;

  // Appends one qubit in |0> at index num_qubits().
  StateVector with_ancilla() const;

 private:
  void check_pauli(const PauliString& p) const;

  int num_qubits_;
  std::vector<cplx> amps_;
};

// <a|b>, conjugate-linear in a.
cplx inner_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);

struct Projection {
  StateVector state;   // renormalized, qubit removed
  double probability;  // Born probability of the outcome
};

double outcome_probability(const StateVector& s, int qubit, int outcome);
// Throws PostSelectionError when the probability is below 1e-14.
Projection project_qubit(const StateVector& s, int qubit, int outcome);

// Basis index <-> qubit-first bitstring.
std::string to_bitstring(std::uint64_t index, int num_qubits);
std::uint64_t from_bitstring(std::string_view bits);

// Draws `shots` basis indices after rotating qubit q into basis[q]
// (Z leaves it alone). Outcome bit 0 means eigenvalue +1.
std::vector<std::uint64_t> sample_indices(const StateVector& s,
                                          const std::vector<Axis>& basis,
                                          int shots, Rng& rng);
std::map<std::string, int> sample_in_pauli_basis(const StateVector& s,
                                                 const std::vector<Axis>& basis,
                                                 int shots,
                                                 std::uint64_t seed);

}  // namespace aqcf

#endif  // AQCF_STATEVECTOR_HPP_
