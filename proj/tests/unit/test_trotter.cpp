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
#include "aqcf/estimator.hpp"
#include "aqcf/trotter.hpp"
#include "oracle.hpp"

namespace aqcf {
namespace {

const ModelSpec kHm4{ModelKind::kHeisenberg, 4, 1};
const ModelSpec kHm8{ModelKind::kHeisenberg, 8, 1};

std::vector<PauliTerm> flatten(const std::vector<LocalTerm>& terms) {
  std::vector<PauliTerm> out;
  for (const auto& t : terms) out.insert(out.end(), t.terms.begin(), t.terms.end());
  return out;
}

// Dense operator of a layer list, built column by column.
oracle::Mat layers_matrix(const std::vector<Layer>& layers, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  oracle::Mat m(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    StateVector e(n, std::vector<cplx>(d, 0.0));
    e[c] = 1.0;
    apply_layers(e.data(), layers);
    m.col(c) = oracle::vec(e);
  }
  return m;
}

TEST(PathValue, EndpointsAndMidpoint) {
  EXPECT_EQ(path_value(0.0, 5.0), 0.0);
  EXPECT_NEAR(path_value(5.0, 5.0), 1.0, 1e-15);
  EXPECT_NEAR(path_value(2.5, 5.0), 0.5, 1e-15);
  EXPECT_THROW(path_value(6.0, 5.0), ConfigError);
  EXPECT_THROW(path_value(-1.0, 5.0), ConfigError);
}

TEST(Schedule, RoundingAndLastStep) {
  AdiabaticSchedule s{5.0, 3};
  EXPECT_EQ(s.num_steps(), 15);
  EXPECT_EQ(s.s_at_step(15), 1.0);
  EXPECT_THROW((AdiabaticSchedule{1.5, 3}.validate()), ConfigError);
  EXPECT_NO_THROW((AdiabaticSchedule{1.0 / 3.0 * 2.0, 3}.validate()));
}

TEST(LocalTermIsing, ZeroPathIsFieldOnly) {
  const auto t = local_term_tfim({0, 1}, 0.0, 4, 4);
  for (const auto& p : t.terms) {
    if (p.paulis.weight() == 2) {
      EXPECT_EQ(p.coeff, 0.0);
    } else {
      EXPECT_DOUBLE_EQ(p.coeff, 0.25);
    }
  }
}

TEST(LocalTermIsing, FullPathSumsToTarget) {
  const ModelSpec spec{ModelKind::kIsing, 3, 3};
  const auto sum = oracle::from_terms(flatten(local_terms(spec, 1.0)), 9);
  EXPECT_LT((sum - oracle::from_terms(build_tfim_target(3, 3).terms(), 9)).norm(), 1e-12);
}

TEST(LocalTermIsing, InterpolationIdentityOnSmallLattices) {
  for (auto [lx, ly] : {std::pair{2, 2}, {3, 2}}) {
    const ModelSpec spec{ModelKind::kIsing, lx, ly};
    const int n = lx * ly;
    for (double s : {0.0, 0.13, 0.5, 0.77, 1.0}) {
      const auto sum = oracle::from_terms(flatten(local_terms(spec, s)), n);
      const oracle::Mat ref = (1 - s) * oracle::from_terms(build_tfim_init(lx, ly).terms(), n) +
                       s * oracle::from_terms(build_tfim_target(lx, ly).terms(), n);
      EXPECT_LT((sum - ref).norm(), 1e-12) << lx << "x" << ly << " s=" << s;
    }
  }
}

TEST(LocalTermHeisenberg, EndpointsAndMidpoint) {
  const auto at0 = oracle::from_terms(flatten(local_terms(kHm4, 0.0)), 4);
  const auto at1 = oracle::from_terms(flatten(local_terms(kHm4, 1.0)), 4);
  const auto init = oracle::from_terms(build_heisenberg_init(4).terms(), 4);
  const auto targ = oracle::from_terms(build_heisenberg_target(4).terms(), 4);
  EXPECT_LT((at0 - init).norm(), 1e-12);
  EXPECT_LT((at1 - targ).norm(), 1e-12);
  const auto mid = oracle::from_terms(flatten(local_terms(kHm4, 0.3)), 4);
  EXPECT_LT((mid - (0.7 * init + 0.3 * targ)).norm(), 1e-12);
  const auto odd = local_term_hm({1, 2}, 0.3);
  for (const auto& p : odd.terms) EXPECT_DOUBLE_EQ(p.coeff, 0.3);
}

TEST(BondGroups, ChainAndSquareLattice) {
  EXPECT_EQ(bond_groups(model_bonds(kHm8)).size(), 2u);
  EXPECT_EQ(bond_groups(model_bonds({ModelKind::kIsing, 4, 4})).size(), 4u);
  // Each group holds pairwise disjoint bonds.
  const auto bonds = model_bonds({ModelKind::kIsing, 4, 3});
  for (const auto& g : bond_groups(bonds)) {
    std::set<int> used;
    for (int i : g) {
      EXPECT_TRUE(used.insert(bonds[i].a).second);
      EXPECT_TRUE(used.insert(bonds[i].b).second);
    }
  }
}

TEST(BuildStep, SingleBondIsExact) {
  const std::vector<LocalTerm> one{local_term_hm({0, 1}, 1.0)};
  const auto layers = build_step(2, one, {{0}}, 0.37);
  std::vector<PauliTerm> h = one[0].terms;
  EXPECT_LT((layers_matrix(layers, 2) - oracle::expm(oracle::from_terms(h, 2), 0.37)).norm(), 1e-12);
}

TEST(BuildStep, LocalErrorScaling) {
  const auto terms = local_terms(kHm4, 0.6);
  const auto groups = bond_groups(model_bonds(kHm4));
  const auto h = oracle::from_terms(flatten(terms), 4);
  for (int order : {2, 4}) {
    auto err = [&](double tau) {
      return oracle::opnorm(layers_matrix(build_step(order, terms, groups, tau), 4) - oracle::expm(h, tau));
    };
    const double ratio = err(0.1) / err(0.05);
    // Local error O(tau^{p+1}).
    const double expected = order == 2 ? 8.0 : 32.0;
    EXPECT_NEAR(ratio, expected, 0.15 * expected) << "order " << order;
  }
}

TEST(BuildStep, UnitaryAndReversible) {
  const auto terms = local_terms(ModelSpec{ModelKind::kIsing, 3, 2}, 0.4);
  const auto groups = bond_groups(model_bonds({ModelKind::kIsing, 3, 2}));
  const auto layers = build_step(2, terms, groups, 0.2);
  auto s = oracle::random_state(6, 4);
  const auto start = s;
  apply_layers(s.data(), layers);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  apply_layers(s.data(), inverse_layers(layers));
  EXPECT_LT((oracle::vec(s) - oracle::vec(start)).norm(), 1e-10);
}

TEST(BuildStep, RejectsBadOrderAndTau) {
  const auto terms = local_terms(kHm4, 0.5);
  const auto groups = bond_groups(model_bonds(kHm4));
  EXPECT_THROW(build_step(3, terms, groups, 0.1), ConfigError);
  EXPECT_THROW(build_step(2, terms, groups, 0.0), ConfigError);
  EXPECT_THROW(build_step(2, terms, groups, std::nan("")), ConfigError);
}

TEST(AppendLayers, SameGroupFuses) {
  const auto terms = local_terms(kHm4, 0.5);
  const auto groups = bond_groups(model_bonds(kHm4));
  std::vector<Layer> two;
  append_layers(two, build_step(2, terms, groups, 0.1));
  append_layers(two, build_step(2, terms, groups, 0.1));
  // Two order-2 steps of 3 layers each share one fused junction.
  EXPECT_EQ(two.size(), 5u);
}

TEST(RunAdiabatic, ZeroTimeIsIdentity) {
  const auto psi = initial_state(kHm8);
  const auto out = run_adiabatic(psi, {0.0, 3}, kHm8, 4);
  for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_EQ(out[i], psi[i]);
}

TEST(RunAdiabatic, InfidelityFallsWithTimeOnEightSites) {
  const auto h = build_heisenberg_target(8);
  const auto eig = lowest_eigenpairs(h, 1);
  double prev = 1.0;
  for (double t : {1.0, 3.0, 5.0, 7.0, 9.0}) {
    const auto out = run_adiabatic(initial_state(kHm8), {t, 3}, kHm8, 4);
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
    const double inf = infidelity(out, eig.vectors[0]);
    EXPECT_LT(inf, prev) << "T=" << t;
    prev = inf;
  }
}

TEST(RunAdiabatic, AgreesWithFineDenseReference) {
  // Piecewise-constant dense propagator at S = 200 with exact exponentials.
  const double total = 10.0;
  const int fine = 200;
  const auto init = oracle::from_terms(build_heisenberg_init(4).terms(), 4);
  const auto targ = oracle::from_terms(build_heisenberg_target(4).terms(), 4);
  oracle::Vec v = oracle::vec(initial_state(kHm4));
  const int steps = static_cast<int>(total * fine);
  for (int j = 1; j <= steps; ++j) {
    const double s = path_value(static_cast<double>(j) / fine, total);
    v = oracle::expm((1 - s) * init + s * targ, 1.0 / fine) * v;
  }
  const auto out = run_adiabatic(initial_state(kHm4), {total, 3}, kHm4, 4);
  EXPECT_GE(std::norm(oracle::vec(out).dot(v)), 0.999);
}

TEST(GateCount, SingleGates) {
  BondGate zz{{0, 1}, {{{{-1.0, PauliString::parse("Z0 Z1")}}, 0.3}}};
  EXPECT_EQ(bond_gate_cost(zz), 1);
  BondGate hm{{0, 1}, {{local_term_hm({0, 1}, 1.0).terms, 0.3}}};
  EXPECT_EQ(bond_gate_cost(hm), 3);
  BondGate field{{0, 1}, {{{{1.0, PauliString::parse("X0")}, {1.0, PauliString::parse("X1")}}, 0.3}}};
  EXPECT_EQ(bond_gate_cost(field), 0);
}

TEST(GateCount, AdiabaticPlansAreLinearInTime) {
  for (double t : {1.0, 3.0, 5.0, 9.0}) {
    const auto hm = count_native_two_qubit(adiabatic_plan(kHm8, {t, 3}, 4)).native_two_qubit;
    EXPECT_EQ(hm, static_cast<std::int64_t>(360 * t + 12)) << t;
    const auto tf = count_native_two_qubit(adiabatic_plan({ModelKind::kIsing, 3, 2}, {t, 3}, 2)).native_two_qubit;
    EXPECT_EQ(tf, static_cast<std::int64_t>(36 * t + 3)) << t;
  }
}

TEST(GateCount, TallyEqualsBondGateSum) {
  const auto plan = adiabatic_plan({ModelKind::kIsing, 4, 3}, {2.0, 3}, 2);
  std::int64_t sum = 0;
  for (const auto& l : plan.layers)
    for (const auto& g : l.gates) sum += bond_gate_cost(g);
  EXPECT_EQ(count_native_two_qubit(plan).native_two_qubit, sum);
}

TEST(PlanMatrix, FourthOrderPlanMatchesDenseProductOfSteps) {
  // The fused plan must equal the unfused product of its steps.
  const AdiabaticSchedule sched{2.0, 3};
  const auto plan = adiabatic_plan(kHm4, sched, 4);
  const auto groups = bond_groups(model_bonds(kHm4));
  oracle::Mat ref = oracle::Mat::Identity(16, 16);
  for (int j = 1; j <= sched.num_steps(); ++j) {
    ref = layers_matrix(build_step(4, local_terms(kHm4, sched.s_at_step(j)), groups, sched.tau()), 4) * ref;
  }
  const oracle::Mat got = std::exp(cplx(0, plan.global_phase)) * layers_matrix(plan.layers, 4);
  EXPECT_LT(oracle::opnorm(got - ref), 1e-12);
}

}  // namespace
}  // namespace aqcf
