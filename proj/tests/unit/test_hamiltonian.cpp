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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "aqcf/errors.hpp"
#include "aqcf/hamiltonian.hpp"
#include "oracle.hpp"

namespace aqcf {
namespace {

int count_axis_terms(const Hamiltonian& h, std::size_t weight) {
  return static_cast<int>(std::count_if(h.terms().begin(), h.terms().end(),
                                        [&](const PauliTerm& t) { return t.paulis.weight() == weight; }));
}

double dense_ground(const oracle::Mat& m) {
  return Eigen::SelfAdjointEigenSolver<oracle::Mat>(m).eigenvalues()(0);
}

TEST(HeisenbergTarget, FourSitesTwelveTerms) {
  const auto h = build_heisenberg_target(4);
  EXPECT_EQ(h.terms().size(), 12u);
  const std::vector<Bond> expected{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  EXPECT_EQ(h.bonds(), expected);
  for (const auto& t : h.terms()) EXPECT_EQ(t.coeff, 1.0);
}

TEST(HeisenbergTarget, OddOrTinyLengthRejected) {
  EXPECT_THROW(build_heisenberg_target(5), ConfigError);
  EXPECT_THROW(build_heisenberg_target(2), ConfigError);
  EXPECT_THROW(build_heisenberg_init(7), ConfigError);
}

TEST(HeisenbergTarget, EightSiteGroundEnergyAgreesWithDense) {
  const auto h = build_heisenberg_target(8);
  const double ref = dense_ground(oracle::from_terms(h.terms(), 8));
  const auto eig = lowest_eigenpairs(h, 1);
  EXPECT_NEAR(eig.values[0], ref, 1e-9);
  // Just above the lower-scan peak at -15 and inside the (-20, -5) window.
  EXPECT_GT(eig.values[0], -15.0);
  EXPECT_LT(eig.values[0], -10.0);
}

TEST(HeisenbergInit, SingletProductEnergies) {
  EXPECT_EQ(build_heisenberg_init(8).terms().size(), 12u);
  EXPECT_NEAR(initial_energy({ModelKind::kHeisenberg, 8, 1}), -12.0, 1e-12);
  EXPECT_NEAR(initial_energy({ModelKind::kHeisenberg, 4, 1}), -6.0, 1e-12);
  const auto psi = initial_state({ModelKind::kHeisenberg, 8, 1});
  EXPECT_NEAR(build_heisenberg_init(8).expectation(psi), -12.0, 1e-12);
}

TEST(HeisenbergInit, AnalyticStateIsTheGroundState) {
  const auto h = build_heisenberg_init(8);
  const auto eig = dense_eigenpairs(h, 2);
  // -12 is non-degenerate: the product of four singlets.
  EXPECT_NEAR(eig.values[0], -12.0, 1e-10);
  EXPECT_GT(eig.values[1], -12.0 + 1.0);
  EXPECT_NEAR(fidelity(eig.vectors[0], initial_state({ModelKind::kHeisenberg, 8, 1})), 1.0, 1e-8);
}

TEST(HeisenbergInit, EvenBondSubsetOfTarget) {
  const auto init = build_heisenberg_init(8);
  const auto targ = build_heisenberg_target(8);
  for (const auto& t : init.terms()) {
    const int a = t.paulis.ops()[0].first;
    EXPECT_EQ(a % 2, 0);
    EXPECT_TRUE(std::any_of(targ.terms().begin(), targ.terms().end(), [&](const PauliTerm& u) {
      return u.paulis == t.paulis && u.coeff == t.coeff;
    }));
  }
}

TEST(IsingTarget, TermCounts) {
  const auto h33 = build_tfim_target(3, 3);
  EXPECT_EQ(count_axis_terms(h33, 1), 9);
  EXPECT_EQ(count_axis_terms(h33, 2), 18);
  const auto h22 = build_tfim_target(2, 2);
  EXPECT_EQ(count_axis_terms(h22, 1), 4);
  EXPECT_EQ(count_axis_terms(h22, 2), 4);
  EXPECT_EQ(count_axis_terms(build_tfim_target(3, 2), 2), 9);
  for (const auto& t : h33.terms()) EXPECT_EQ(t.coeff, t.paulis.weight() == 1 ? 1.0 : -1.0);
  EXPECT_THROW(build_tfim_target(1, 4), ConfigError);
}

TEST(IsingTarget, NoDuplicateBonds) {
  for (auto [lx, ly] : {std::pair{2, 2}, {3, 2}, {2, 3}, {4, 3}, {3, 3}}) {
    std::set<std::pair<int, int>> seen;
    const auto h = build_tfim_target(lx, ly);
    for (const auto& b : h.bonds()) {
      EXPECT_TRUE(seen.insert({std::min(b.a, b.b), std::max(b.a, b.b)}).second) << lx << "x" << ly;
    }
  }
}

TEST(IsingTarget, ThreeByTwoGroundEnergyAgreesWithDense) {
  const auto h = build_tfim_target(3, 2);
  const double ref = dense_ground(oracle::from_terms(h.terms(), 6));
  EXPECT_NEAR(lowest_eigenpairs(h, 1).values[0], ref, 1e-8);
}

TEST(IsingInit, FieldOnlyGroundState) {
  EXPECT_NEAR(initial_energy({ModelKind::kIsing, 2, 2}), -4.0, 1e-12);
  EXPECT_NEAR(initial_energy({ModelKind::kIsing, 5, 4}), -20.0, 1e-12);
  const auto init = build_tfim_init(2, 2);
  for (const auto& t : init.terms()) EXPECT_EQ(t.paulis.weight(), 1u);
  const auto psi = initial_state({ModelKind::kIsing, 2, 2});
  // |->^4: amplitude (-1)^popcount / 4.
  for (std::size_t b = 0; b < 16; ++b) {
    const double sign = (__builtin_popcountll(b) % 2) ? -1.0 : 1.0;
    EXPECT_NEAR(std::abs(psi[b] - sign * 0.25), 0.0, 1e-15);
  }
  const auto eig = dense_eigenpairs(init, 1);
  EXPECT_NEAR(fidelity(eig.vectors[0], psi), 1.0, 1e-8);
}

TEST(IsingInit, FieldPartOfTarget) {
  const auto init = build_tfim_init(3, 3);
  const auto targ = build_tfim_target(3, 3);
  std::vector<PauliTerm> field;
  for (const auto& t : targ.terms())
    if (t.paulis.weight() == 1) field.push_back(t);
  EXPECT_LT((oracle::from_terms(init.terms(), 9) - oracle::from_terms(field, 9)).norm(), 1e-12);
}

TEST(ApplyHamiltonian, Examples) {
  Hamiltonian z0(1, {{1.0, PauliString{{0, Axis::Z}}}});
  const auto out = z0.apply(StateVector::basis(1, "0"));
  EXPECT_EQ(out[0], cplx(1.0));
  EXPECT_EQ(out[1], cplx(0.0));
}

TEST(ApplyHamiltonian, MatchesDenseOnFourQubits) {
  Hamiltonian h(4, {{0.3, PauliString::parse("X0 Y1")},
                    {-1.2, PauliString::parse("Z2 Z3")},
                    {0.7, PauliString::parse("Y0 X2 Z3")},
                    {2.0, PauliString()}});
  const auto s = oracle::random_state(4, 3);
  const oracle::Vec ref = oracle::from_terms(h.terms(), 4) * oracle::vec(s);
  EXPECT_LT((oracle::vec(h.apply(s)) - ref).norm(), 1e-12);
  EXPECT_LT((h.dense() - oracle::from_terms(h.terms(), 4)).norm(), 1e-12);
  EXPECT_THROW(h.apply(StateVector(3)), ConfigError);
}

TEST(ApplyHamiltonian, EigenvectorResidual) {
  const auto h = build_heisenberg_target(6);
  const auto eig = lowest_eigenpairs(h, 3);
  for (int j = 0; j < 3; ++j) {
    auto hv = oracle::vec(h.apply(eig.vectors[j]));
    EXPECT_LT((hv - eig.values[j] * oracle::vec(eig.vectors[j])).norm(), 1e-8);
  }
}

TEST(Hermiticity, DenseMatricesAreSelfAdjoint) {
  for (const auto& h : {build_heisenberg_target(4), build_heisenberg_init(4), build_tfim_target(2, 2),
                        build_tfim_init(2, 2)}) {
    const auto m = oracle::from_terms(h.terms(), h.num_qubits());
    EXPECT_LT((m - m.adjoint()).norm(), 1e-14);
  }
}

TEST(Eigensolver, FieldOnlyThreeQubits) {
  Hamiltonian h(3, {{1.0, PauliString{{0, Axis::X}}}, {1.0, PauliString{{1, Axis::X}}}, {1.0, PauliString{{2, Axis::X}}}});
  EXPECT_NEAR(lowest_eigenpairs(h, 1).values[0], -3.0, 1e-10);
}

TEST(Eigensolver, HeisenbergFourSitesGapMatchesDense) {
  const auto h = build_heisenberg_target(4);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::from_terms(h.terms(), 4));
  const auto eig = lowest_eigenpairs(h, 2);
  EXPECT_NEAR(eig.values[0], es.eigenvalues()(0), 1e-10);
  EXPECT_NEAR(eig.values[1], es.eigenvalues()(1), 1e-10);
  EXPECT_NEAR(eig.values[1] - eig.values[0], es.eigenvalues()(1) - es.eigenvalues()(0), 1e-10);
}

TEST(Eigensolver, OrthonormalAndDegeneracyResolved) {
  // HM L=6 has a threefold degenerate first excited level (triplet).
  const auto h = build_heisenberg_target(6);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::from_terms(h.terms(), 6));
  const auto eig = lowest_eigenpairs(h, 6);
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(eig.values[j], es.eigenvalues()(j), 1e-8) << j;
    EXPECT_LE(eig.residuals[j], 1e-8);
    for (int k = 0; k < 6; ++k) {
      EXPECT_NEAR(std::abs(inner_product(eig.vectors[j], eig.vectors[k])), j == k ? 1.0 : 0.0, 1e-8);
    }
  }
}

TEST(Eigensolver, TranslationInvariance) {
  // Relabel sites i -> i+1 mod n; the spectrum cannot change.
  for (const auto& h : {build_heisenberg_target(6), build_tfim_target(3, 2)}) {
    const int n = h.num_qubits();
    std::vector<PauliTerm> shifted;
    for (const auto& t : h.terms()) {
      PauliString p;
      for (const auto& [q, a] : t.paulis.ops()) p.set((q + 1) % n, a);
      shifted.push_back({t.coeff, p});
    }
    const double e0 = dense_ground(oracle::from_terms(h.terms(), n));
    EXPECT_NEAR(lowest_eigenpairs(Hamiltonian(n, shifted), 1).values[0], e0, 1e-9);
  }
}

TEST(FidelitySpectrum, EigenstateAndCompleteness) {
  const auto h = build_heisenberg_target(4);
  const auto eig = dense_eigenpairs(h, 16);
  const auto levels0 = fidelity_spectrum(eig.vectors[0], eig);
  EXPECT_NEAR(levels0[0].fidelity, 1.0, 1e-12);
  for (std::size_t j = 1; j < levels0.size(); ++j) EXPECT_NEAR(levels0[j].fidelity, 0.0, 1e-12);

  const auto s = oracle::random_state(4, 31);
  const auto levels = fidelity_spectrum(s, eig);
  double sum = 0.0;
  int deg = 0;
  for (const auto& l : levels) {
    EXPECT_GE(l.fidelity, 0.0);
    EXPECT_LE(l.fidelity, 1.0 + 1e-12);
    sum += l.fidelity;
    deg += l.degeneracy;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(deg, 16);
}

TEST(FidelitySpectrum, MatchesDenseProjectorOnLevels) {
  const auto h = build_heisenberg_target(4);
  const auto m = oracle::from_terms(h.terms(), 4);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(m);
  const auto s = oracle::random_state(4, 32);
  const auto levels = fidelity_spectrum(s, dense_eigenpairs(h, 16));
  // Projector onto each eigenvalue cluster, built from the oracle basis.
  for (const auto& l : levels) {
    oracle::Mat proj = oracle::Mat::Zero(16, 16);
    for (int j = 0; j < 16; ++j)
      if (std::abs(es.eigenvalues()(j) - l.energy) < 1e-8) proj += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
    EXPECT_NEAR(l.fidelity, (oracle::vec(s).adjoint() * proj * oracle::vec(s))(0).real(), 1e-10);
  }
}

TEST(FidelitySpectrum, AdiabaticStateSitsOnLowestTwoLevels) {
  // Weak check here; the trotter tests cover the evolution itself. A state
  // made of the two lowest eigenvectors reports exactly those two levels.
  const auto h = build_heisenberg_target(8);
  const auto eig = lowest_eigenpairs(h, 8);
  StateVector mix(8, std::vector<cplx>(256, 0.0));
  for (std::size_t i = 0; i < 256; ++i) mix[i] = 0.8 * eig.vectors[0][i] + 0.6 * eig.vectors[1][i];
  const auto levels = fidelity_spectrum(mix, eig);
  EXPECT_NEAR(levels[0].fidelity, 0.64, 1e-8);
}

TEST(HamiltonianJson, RoundTrip) {
  const auto h = build_tfim_target(3, 2);
  const auto j = h.to_json();
  EXPECT_EQ(j.at("model"), "tfim");
  const auto back = Hamiltonian::from_json(j);
  EXPECT_LT((back.dense() - h.dense()).norm(), 1e-15);
}

}  // namespace
}  // namespace aqcf
