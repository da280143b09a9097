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

#include "aqcf/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

#include "aqcf/errors.hpp"

namespace aqcf {

namespace {

constexpr cplx kI{0.0, 1.0};

bool is_pow2_len(std::size_t n, int q) {
  return q >= 0 && q <= kMaxQubits && n == (std::size_t{1} << q);
}

// i^k for k mod 4.
cplx ipow(int k) {
  switch (k & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline double parity_sign(std::uint64_t b, std::uint64_t mask) {
  return (std::popcount(b & mask) & 1) ? -1.0 : 1.0;
}

}  // namespace

char axis_char(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

Axis axis_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
    default: throw ConfigError(std::string("unknown Pauli axis '") + c + "'");
  }
}

PauliString::PauliString(std::initializer_list<std::pair<int, Axis>> ops) {
  for (auto [q, a] : ops) set(q, a);
}

PauliString PauliString::parse(std::string_view text) {
  PauliString p;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    Axis a = axis_from_char(text[i++]);
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw ConfigError("Pauli string: missing qubit index in '" + std::string(text) + "'");
    p.set(std::stoi(std::string(text.substr(i, j - i))), a);
    i = j;
  }
  return p;
}

void PauliString::set(int qubit, Axis axis) {
  if (qubit < 0 || qubit >= 63) throw ConfigError("Pauli string: qubit index out of range");
  auto it = std::lower_bound(ops_.begin(), ops_.end(), qubit,
                             [](const auto& op, int q) { return op.first < q; });
  if (it != ops_.end() && it->first == qubit) {
    throw ConfigError("Pauli string: duplicate qubit " + std::to_string(qubit));
  }
  ops_.insert(it, {qubit, axis});
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (auto [q, a] : ops_) {
    if (a != Axis::Z) m |= std::uint64_t{1} << q;
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (auto [q, a] : ops_) {
    if (a != Axis::X) m |= std::uint64_t{1} << q;
  }
  return m;
}

int PauliString::num_y() const {
  return static_cast<int>(std::count_if(ops_.begin(), ops_.end(),
                                        [](const auto& op) { return op.second == Axis::Y; }));
}

bool PauliString::commutes_with(const PauliString& other) const {
  // Symplectic form: count qubits where the two single-qubit factors anticommute.
  std::uint64_t x1 = x_mask(), z1 = z_mask(), x2 = other.x_mask(), z2 = other.z_mask();
  return (std::popcount((x1 & z2) ^ (z1 & x2)) & 1) == 0;
}

std::string PauliString::str() const {
  std::string s;
  for (auto [q, a] : ops_) {
    if (!s.empty()) s += ' ';
    s += axis_char(a);
    s += std::to_string(q);
  }
  return s.empty() ? "I" : s;
}

namespace kernel {

void apply_pauli(std::span<cplx> amps, const PauliString& p) {
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  const cplx phase = ipow(p.num_y());
  const std::uint64_t n = amps.size();
  if (xm == 0) {
    for (std::uint64_t b = 0; b < n; ++b) amps[b] *= phase * parity_sign(b, zm);
    return;
  }
  const std::uint64_t hi = std::uint64_t{1} << (63 - std::countl_zero(xm));
  for (std::uint64_t b = 0; b < n; ++b) {
    if (b & hi) continue;
    const std::uint64_t c = b ^ xm;
    const cplx ab = amps[b], ac = amps[c];
    amps[c] = phase * parity_sign(b, zm) * ab;
    amps[b] = phase * parity_sign(c, zm) * ac;
  }
}

void apply_pauli_rotation(std::span<cplx> amps, const PauliString& p, double angle) {
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  const cplx mis = -kI * s * ipow(p.num_y());
  const std::uint64_t n = amps.size();
  if (xm == 0) {
    const cplx plus = c + mis, minus = c - mis;
    for (std::uint64_t b = 0; b < n; ++b) {
      amps[b] *= (std::popcount(b & zm) & 1) ? minus : plus;
    }
    return;
  }
  const std::uint64_t hi = std::uint64_t{1} << (63 - std::countl_zero(xm));
  for (std::uint64_t b = 0; b < n; ++b) {
    if (b & hi) continue;
    const std::uint64_t d = b ^ xm;
    const cplx ab = amps[b], ad = amps[d];
    amps[b] = c * ab + mis * parity_sign(d, zm) * ad;
    amps[d] = c * ad + mis * parity_sign(b, zm) * ab;
  }
}

void apply_1q(std::span<cplx> amps, int q, const Eigen::Matrix2cd& u) {
  const std::uint64_t m = std::uint64_t{1} << q;
  const std::uint64_t n = amps.size();
  for (std::uint64_t b = 0; b < n; ++b) {
    if (b & m) continue;
    const cplx a0 = amps[b], a1 = amps[b | m];
    amps[b] = u(0, 0) * a0 + u(0, 1) * a1;
    amps[b | m] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_2q(std::span<cplx> amps, int q0, int q1, const Eigen::Matrix4cd& u) {
  const std::uint64_t m0 = std::uint64_t{1} << q0, m1 = std::uint64_t{1} << q1;
  const std::uint64_t n = amps.size();
  for (std::uint64_t b = 0; b < n; ++b) {
    if (b & (m0 | m1)) continue;
    const std::uint64_t idx[4] = {b, b | m0, b | m1, b | m0 | m1};
    cplx v[4];
    for (int i = 0; i < 4; ++i) v[i] = amps[idx[i]];
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = u(r, 0) * v[0] + u(r, 1) * v[1] + u(r, 2) * v[2] + u(r, 3) * v[3];
    }
  }
}

cplx expectation(std::span<const cplx> amps, const PauliString& p) {
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  cplx acc = 0.0;
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    acc += std::conj(amps[b ^ xm]) * parity_sign(b, zm) * amps[b];
  }
  return acc * ipow(p.num_y());
}

}  // namespace kernel

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) {
    throw ConfigError("state: qubit count out of range");
  }
  amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (!is_pow2_len(amps_.size(), num_qubits)) {
    throw ConfigError("state: amplitude count must be 2^num_qubits");
  }
}

StateVector StateVector::basis(int num_qubits, std::string_view bits) {
  if (static_cast<int>(bits.size()) != num_qubits) {
    throw ConfigError("basis state: bitstring length " + std::to_string(bits.size()) +
                      " does not match " + std::to_string(num_qubits) + " qubits");
  }
  StateVector s(num_qubits);
  s.amps_[0] = 0.0;
  s.amps_[from_bitstring(bits)] = 1.0;
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericalError("state: cannot normalize the zero vector");
  // Same arithmetic as project_qubit, so a trivially post-selected state
  // equals the normalized input bit for bit.
  const double scale = 1.0 / n;
  for (auto& a : amps_) a *= scale;
}

void StateVector::check_pauli(const PauliString& p) const {
  if (p.max_qubit() >= num_qubits_) throw ConfigError("Pauli string acts outside the register");
}

void StateVector::apply_pauli(const PauliString& p) {
  check_pauli(p);
  kernel::apply_pauli(amps_, p);
}

void StateVector::apply_pauli_rotation(const PauliString& p, double angle) {
  check_pauli(p);
  kernel::apply_pauli_rotation(amps_, p, angle);
}

void StateVector::apply_1q(int q, const Eigen::Matrix2cd& u) {
  if (q < 0 || q >= num_qubits_) throw ConfigError("gate qubit out of range");
  kernel::apply_1q(amps_, q, u);
}

void StateVector::apply_2q(int q0, int q1, const Eigen::Matrix4cd& u) {
  if (q0 < 0 || q1 < 0 || q0 >= num_qubits_ || q1 >= num_qubits_ || q0 == q1) {
    throw ConfigError("two-qubit gate needs two distinct valid qubits");
  }
  kernel::apply_2q(amps_, q0, q1, u);
}

double StateVector::expectation(const PauliString& p) const {
  check_pauli(p);
  return kernel::expectation(amps_, p).real();
}

StateVector StateVector::with_ancilla() const {
  std::vector<cplx> out(amps_.size() * 2, cplx{0.0, 0.0});
  std::copy(amps_.begin(), amps_.end(), out.begin());
  return StateVector(num_qubits_ + 1, std::move(out));
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw ConfigError("inner product: dimension mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

double outcome_probability(const StateVector& s, int qubit, int outcome) {
  if (qubit < 0 || qubit >= s.num_qubits() || (outcome != 0 && outcome != 1)) {
    throw ConfigError("projection: bad qubit or outcome");
  }
  const std::uint64_t m = std::uint64_t{1} << qubit;
  double p = 0.0;
  for (std::uint64_t b = 0; b < s.size(); ++b) {
    if (((b & m) != 0) == (outcome == 1)) p += std::norm(s[b]);
  }
  return p;
}

Projection project_qubit(const StateVector& s, int qubit, int outcome) {
  const double p = outcome_probability(s, qubit, outcome);
  if (p < 1e-14) {
    throw PostSelectionError("projection: outcome probability below 1e-14", p);
  }
  const std::uint64_t low = (std::uint64_t{1} << qubit) - 1;
  const double scale = 1.0 / std::sqrt(p);
  std::vector<cplx> out(s.size() / 2);
  for (std::uint64_t r = 0; r < out.size(); ++r) {
    const std::uint64_t b = (r & low) | ((r & ~low) << 1) |
                            (static_cast<std::uint64_t>(outcome) << qubit);
    out[r] = s[b] * scale;
  }
  return {StateVector(s.num_qubits() - 1, std::move(out)), p};
}

std::string to_bitstring(std::uint64_t index, int num_qubits) {
  std::string s(num_qubits, '0');
  for (int q = 0; q < num_qubits; ++q) {
    if ((index >> q) & 1) s[q] = '1';
  }
  return s;
}

std::uint64_t from_bitstring(std::string_view bits) {
  std::uint64_t b = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1') {
      b |= std::uint64_t{1} << q;
    } else if (bits[q] != '0') {
      throw ConfigError("bitstring may only contain '0' and '1'");
    }
  }
  return b;
}

std::vector<std::uint64_t> sample_indices(const StateVector& s, const std::vector<Axis>& basis,
                                          int shots, Rng& rng) {
  if (shots < 1) throw ConfigError("sampling: shots must be >= 1");
  if (static_cast<int>(basis.size()) != s.num_qubits()) {
    throw ConfigError("sampling: one basis axis per qubit required");
  }
  StateVector rotated = s;
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd h;
  h << r, r, r, -r;
  Eigen::Matrix2cd sdg_then_h;  // H * S^dagger
  sdg_then_h << r, -kI * r, r, kI * r;
  for (int q = 0; q < s.num_qubits(); ++q) {
    if (basis[q] == Axis::X) rotated.apply_1q(q, h);
    if (basis[q] == Axis::Y) rotated.apply_1q(q, sdg_then_h);
  }
  std::vector<double> cdf(rotated.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < rotated.size(); ++b) {
    acc += std::norm(rotated[b]);
    cdf[b] = acc;
  }
  std::vector<std::uint64_t> out(shots);
  for (int k = 0; k < shots; ++k) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound never lands on a zero-probability entry.
    if (it == cdf.end()) --it;
    out[k] = static_cast<std::uint64_t>(it - cdf.begin());
  }
  return out;
}

std::map<std::string, int> sample_in_pauli_basis(const StateVector& s,
                                                 const std::vector<Axis>& basis, int shots,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  std::map<std::string, int> counts;
  for (auto b : sample_indices(s, basis, shots, rng)) ++counts[to_bitstring(b, s.num_qubits())];
  return counts;
}

}  // namespace aqcf
