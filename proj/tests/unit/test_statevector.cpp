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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "aqcf/errors.hpp"
#include "aqcf/statevector.hpp"
#include "oracle.hpp"

namespace aqcf {
namespace {

using std::numbers::pi;
const cplx kI(0.0, 1.0);

TEST(BasisState, OneQubitZero) {
  auto s = StateVector::basis(1, "0");
  EXPECT_EQ(s[0], cplx(1.0));
  EXPECT_EQ(s[1], cplx(0.0));
}

TEST(BasisState, TwoQubitsElevenIsIndexThree) {
  auto s = StateVector::basis(2, "11");
  EXPECT_EQ(s[3], cplx(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
}

TEST(BasisState, QubitFirstLabelling) {
  // Character k is qubit k and qubit k is bit k: "010" is index 2.
  auto s = StateVector::basis(3, "010");
  EXPECT_EQ(s[2], cplx(1.0));
  EXPECT_EQ(from_bitstring("011"), 6u);
  EXPECT_EQ(to_bitstring(6, 3), "011");
}

TEST(BasisState, LengthMismatchIsConfigError) {
  EXPECT_THROW(StateVector::basis(3, "01"), ConfigError);
  EXPECT_THROW(StateVector::basis(2, "0a"), ConfigError);
}

TEST(PauliRotation, ZZOnEigenstateIsGlobalPhase) {
  const double phi = 0.7;
  auto s = StateVector::basis(2, "00");
  s.apply_pauli_rotation(PauliString{{0, Axis::Z}, {1, Axis::Z}}, phi);
  EXPECT_NEAR(std::abs(s[0] - std::exp(-kI * phi / 2.0)), 0.0, 1e-15);
  EXPECT_EQ(std::abs(s[1]) + std::abs(s[2]) + std::abs(s[3]), 0.0);
}

TEST(PauliRotation, ZeroAngleIsIdentity) {
  auto s = oracle::random_state(3, 1);
  auto t = s;
  t.apply_pauli_rotation(PauliString::parse("X0 Y1 Z2"), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i], t[i]);
}

TEST(PauliRotation, PiAboutXMapsZeroToMinusIOne) {
  auto s = StateVector::basis(1, "0");
  s.apply_pauli_rotation(PauliString{{0, Axis::X}}, pi);
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - (-kI)), 0.0, 1e-15);
}

TEST(PauliRotation, MatchesDenseExponential) {
  const int n = 4;
  for (const char* text : {"X0", "Y2", "Z3", "X0 Z1", "Y1 Y3", "X0 Y1 Z2 X3", "Z0 Z2"}) {
    const auto p = PauliString::parse(text);
    auto s = oracle::random_state(n, 5);
    const oracle::Vec ref = oracle::expm(oracle::pauli(p, n), 0.5 * 1.234) * oracle::vec(s);
    s.apply_pauli_rotation(p, 1.234);
    EXPECT_LT((oracle::vec(s) - ref).norm(), 1e-12) << text;
    EXPECT_NEAR(s.norm(), 1.0, 1e-12) << text;
  }
}

TEST(PauliRotation, AnglesCompose) {
  const auto p = PauliString::parse("X0 Y2");
  auto a = oracle::random_state(3, 2);
  auto b = a;
  a.apply_pauli_rotation(p, 0.3);
  a.apply_pauli_rotation(p, 1.1);
  b.apply_pauli_rotation(p, 1.4);
  EXPECT_LT((oracle::vec(a) - oracle::vec(b)).norm(), 1e-10);
}

TEST(PauliRotation, OutOfRangeQubitRejected) {
  StateVector s(2);
  EXPECT_THROW(s.apply_pauli_rotation(PauliString{{2, Axis::X}}, 0.1), ConfigError);
}

TEST(ApplyPauli, MatchesDense) {
  const auto p = PauliString::parse("Y0 X1 Z3");
  auto s = oracle::random_state(4, 3);
  const oracle::Vec ref = oracle::pauli(p, 4) * oracle::vec(s);
  s.apply_pauli(p);
  EXPECT_LT((oracle::vec(s) - ref).norm(), 1e-14);
}

TEST(ApplyTwoQubit, LocalIndexConvention) {
  // CNOT with control q0 and target q1 in the bit(q0) + 2 bit(q1) basis.
  Eigen::Matrix4cd cnot = Eigen::Matrix4cd::Zero();
  cnot(0, 0) = cnot(2, 2) = 1.0;
  cnot(3, 1) = cnot(1, 3) = 1.0;
  auto s = StateVector::basis(3, "100");  // qubit 0 set
  s.apply_2q(0, 2, cnot);
  EXPECT_EQ(s[from_bitstring("101")], cplx(1.0));
}

TEST(Expectation, Examples) {
  EXPECT_DOUBLE_EQ(StateVector::basis(1, "0").expectation(PauliString{{0, Axis::Z}}), 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  StateVector plus(1, {r, r});
  EXPECT_NEAR(plus.expectation(PauliString{{0, Axis::Z}}), 0.0, 1e-15);
  StateVector singlet(2, {0.0, r, -r, 0.0});
  EXPECT_NEAR(singlet.expectation(PauliString::parse("X0 X1")), -1.0, 1e-15);
  EXPECT_NEAR(singlet.expectation(PauliString::parse("Y0 Y1")), -1.0, 1e-15);
  EXPECT_NEAR(singlet.expectation(PauliString::parse("Z0 Z1")), -1.0, 1e-15);
}

TEST(Expectation, MatchesDenseAndIsBounded) {
  auto s = oracle::random_state(4, 4);
  for (const char* text : {"X0", "Y1 Z2", "X0 X1 X2 X3", "Y0 Y3", "Z1"}) {
    const auto p = PauliString::parse(text);
    const cplx ref = oracle::vec(s).dot(oracle::pauli(p, 4) * oracle::vec(s));
    const double e = s.expectation(p);
    EXPECT_NEAR(e, ref.real(), 1e-12) << text;
    EXPECT_NEAR(ref.imag(), 0.0, 1e-12);
    EXPECT_LE(std::abs(e), 1.0 + 1e-12);
  }
}

TEST(Sampling, ZeroStateInZBasis) {
  auto counts = sample_in_pauli_basis(StateVector(1), {Axis::Z}, 500, 1);
  ASSERT_EQ(counts.size(), 1u);
  EXPECT_EQ(counts["0"], 500);
}

TEST(Sampling, PlusStateInXBasis) {
  const double r = 1.0 / std::sqrt(2.0);
  auto counts = sample_in_pauli_basis(StateVector(1, {r, r}), {Axis::X}, 500, 1);
  ASSERT_EQ(counts.size(), 1u);
  EXPECT_EQ(counts["0"], 500);
}

TEST(Sampling, YBasisEigenstate) {
  // (|0> + i|1>)/sqrt2 is the +1 eigenstate of Y.
  const double r = 1.0 / std::sqrt(2.0);
  auto counts = sample_in_pauli_basis(StateVector(1, {r, kI * r}), {Axis::Y}, 200, 3);
  EXPECT_EQ(counts["0"], 200);
}

TEST(Sampling, PlusStateInZBasisIsFair) {
  const double r = 1.0 / std::sqrt(2.0);
  const int shots = 100000;
  auto counts = sample_in_pauli_basis(StateVector(1, {r, r}), {Axis::Z}, shots, 11);
  const double f = static_cast<double>(counts["0"]) / shots;
  EXPECT_NEAR(f, 0.5, 5 * 0.5 / std::sqrt(shots));
}

TEST(Sampling, TotalVariationAgainstBornRule) {
  const int n = 4, shots = 100000;
  auto s = oracle::random_state(n, 8);
  const std::vector<Axis> basis{Axis::X, Axis::Y, Axis::Z, Axis::X};
  // Oracle: rotate with dense H and H S^dagger, then square amplitudes.
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd h, hs;
  h << r, r, r, -r;
  hs << r, -kI * r, r, kI * r;
  oracle::Mat u = oracle::Mat::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    oracle::Mat f = basis[q] == Axis::X ? oracle::Mat(h) : basis[q] == Axis::Y ? oracle::Mat(hs) : oracle::Mat::Identity(2, 2);
    u = oracle::kron(u, f);
  }
  const oracle::Vec rotated = u * oracle::vec(s);
  auto counts = sample_in_pauli_basis(s, basis, shots, 21);
  double tv = 0.0;
  for (Eigen::Index b = 0; b < rotated.size(); ++b) {
    const double emp = static_cast<double>(counts[to_bitstring(b, n)]) / shots;
    tv += std::abs(emp - std::norm(rotated(b)));
  }
  EXPECT_LT(0.5 * tv, 5.0 / std::sqrt(shots));
}

TEST(Sampling, DeterministicForSeedAndRejectsZeroShots) {
  auto s = oracle::random_state(3, 9);
  const std::vector<Axis> z(3, Axis::Z);
  EXPECT_EQ(sample_in_pauli_basis(s, z, 1000, 5), sample_in_pauli_basis(s, z, 1000, 5));
  EXPECT_NE(sample_in_pauli_basis(s, z, 1000, 5), sample_in_pauli_basis(s, z, 1000, 6));
  EXPECT_THROW(sample_in_pauli_basis(s, z, 0, 5), ConfigError);
}

TEST(Projection, ProductStateAncillaZero) {
  auto phi = oracle::random_state(3, 10);
  auto [post, p] = project_qubit(phi.with_ancilla(), 3, 0);
  EXPECT_DOUBLE_EQ(p, 1.0);
  EXPECT_NEAR(std::abs(inner_product(post, phi)), 1.0, 1e-14);
}

TEST(Projection, EqualSuperpositionHalf) {
  const double r = 1.0 / std::sqrt(2.0);
  auto [post, p] = project_qubit(StateVector(1, {r, r}), 0, 0);
  EXPECT_NEAR(p, 0.5, 1e-15);
  EXPECT_EQ(post.num_qubits(), 0);
}

TEST(Projection, OutcomesSumToOneAndMatchDense) {
  auto s = oracle::random_state(4, 12);
  for (int q = 0; q < 4; ++q) {
    const double p0 = outcome_probability(s, q, 0);
    const double p1 = outcome_probability(s, q, 1);
    EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
    // Dense projector (1 + Z_q)/2.
    const auto z = oracle::pauli(PauliString{{q, Axis::Z}}, 4);
    const oracle::Mat proj = 0.5 * (oracle::Mat::Identity(16, 16) + z);
    EXPECT_NEAR(p0, (oracle::vec(s).adjoint() * proj * oracle::vec(s))(0).real(), 1e-12);
    auto [post, p] = project_qubit(s, q, 1);
    EXPECT_NEAR(p, p1, 1e-15);
    EXPECT_NEAR(post.norm(), 1.0, 1e-12);
  }
}

TEST(Projection, ImpossibleOutcomeThrows) {
  EXPECT_THROW(project_qubit(StateVector::basis(2, "00"), 1, 1), PostSelectionError);
}

TEST(InnerProduct, Examples) {
  auto phi = oracle::random_state(3, 13);
  EXPECT_NEAR(std::abs(inner_product(phi, phi) - 1.0), 0.0, 1e-14);
  EXPECT_EQ(inner_product(StateVector::basis(1, "0"), StateVector::basis(1, "1")), cplx(0.0));
  auto psi = oracle::random_state(3, 14);
  const cplx ref = oracle::vec(phi).dot(oracle::vec(psi));  // conjugates the first
  EXPECT_NEAR(std::abs(inner_product(phi, psi) - ref), 0.0, 1e-12);
  EXPECT_LE(std::abs(inner_product(phi, psi)), 1.0);
  EXPECT_THROW(inner_product(StateVector(2), StateVector(3)), ConfigError);
}

TEST(Normalize, ScalesByReciprocalNorm) {
  StateVector s(1, {3.0, 4.0});
  s.normalize();
  EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(s[1].real(), 0.8, 1e-15);
}

TEST(PauliStringParse, BothSpellings) {
  EXPECT_EQ(PauliString::parse("X0 Y3"), PauliString::parse("X0Y3"));
  EXPECT_EQ(PauliString::parse("Y3 X0").str(), PauliString::parse("X0 Y3").str());
  EXPECT_FALSE(PauliString::parse("X0 Y1").commutes_with(PauliString::parse("Z0")));
  EXPECT_TRUE(PauliString::parse("X0 X1").commutes_with(PauliString::parse("Z0 Z1")));
}

}  // namespace
}  // namespace aqcf
