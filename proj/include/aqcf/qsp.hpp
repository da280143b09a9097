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

// Step-filter polynomials and symmetric phase factors.
//
// Scalar model of the filter circuit for one eigenvalue l of the rescaled
// Hamiltonian:
//
//   M(l) = R(phi_eta) A_eta ... R(phi_1) A_1 R(phi_0),   R(phi) = exp(i phi X)
//
// with A_j = diag(1, exp(-i l)) for odd j (controlled U) and
// diag(1, exp(+i l)) for even j (controlled U^dagger). The filter is
// F(x) = Re <0|M|0> at x = cos(l / 2). For palindromic phases <0|M|0> is
// real and F is an even polynomial of degree eta in x.

#ifndef AQCF_QSP_HPP_
#define AQCF_QSP_HPP_

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqcf/statevector.hpp"

namespace aqcf {

struct FilterSpec {
  int eta = 4;          // number of controlled-U slots; phases has eta + 1 entries
  double mu = 0.8;      // cutoff in x
  double width = -1.0;  // half-width of the excluded band; <= 0 picks the default

  static double default_width(double mu) { return 0.05 * (1.0 - mu) + 0.01; }
  double transition_width() const { return width > 0.0 ? width : default_width(mu); }
  double cutoff_angle() const;  // 2 acos(mu)
  void validate() const;
};

// 1 for |x| > mu, 0 for |x| < mu, 1/2 at the edges.
double shifted_sign(double x, double mu);

// sum_k c_k T_{2k}(x).
class EvenPolynomial {
 public:
  EvenPolynomial() = default;
  explicit EvenPolynomial(std::vector<double> even_cheb);

  double operator()(double x) const;
  const std::vector<double>& coefficients() const { return c_; }
  int degree() const { return c_.empty() ? 0 : 2 * (static_cast<int>(c_.size()) - 1); }

 private:
  std::vector<double> c_;
};

// Positive Chebyshev nodes cos((2j+1) pi / 4m), j < m.
std::vector<double> positive_chebyshev_nodes(int m);

// Max |p - S| over a 10^4-step grid on [0, 1], skipping | |x| - mu | <= width.
double band_error(const EvenPolynomial& p, const FilterSpec& spec);

struct StepDesign {
  EvenPolynomial poly;
  double steepness;   // k of the erf profile
  double band_error;  // outside the transition band
  bool flagged;       // band_error > 0.45: filter is not useful
};

// Even interpolant of 1 + (erf(k(x - mu)) - erf(k(x + mu))) / 2 at the
// positive Chebyshev nodes, scaled to max |F| = 0.99. k is scanned over a
// geometric grid and the smallest band error wins.
StepDesign design_step_polynomial(const FilterSpec& spec);

struct PhaseSequence {
  std::vector<double> phases;

  int eta() const { return static_cast<int>(phases.size()) - 1; }
  bool palindromic() const;
  void validate() const;
  static PhaseSequence zeros(int eta) { return {std::vector<double>(eta + 1, 0.0)}; }
};

// <0|M(l)|0> for the scalar model above.
cplx qetu_matrix_element(const std::vector<double>& phases, double lambda_tilde);
// F(x); |x| <= 1.
double evaluate_filter(const PhaseSequence& phases, double x);
// F(cos(l/2)) for any real l.
double filter_profile(const PhaseSequence& phases, double lambda_tilde);

struct PhaseSolveOptions {
  double tolerance = 1e-8;  // max error at the fitting nodes
  int max_restarts = 10;
  std::uint64_t seed = 7;
};

struct PhaseSolution {
  PhaseSequence phases;
  double residual;  // max error at the fitting nodes
  int restarts;
};

// Levenberg-Marquardt on the eta/2 + 1 free half-phases, matching F to
// `target` at the eta/2 + 1 positive Chebyshev nodes. Throws SolverError
// with the best residual when every restart stagnates.
PhaseSolution solve_symmetric_phases(const EvenPolynomial& target, int eta, const PhaseSolveOptions& opts = {});

// Max |F_phases - p| on `points` equispaced x in [-1, 1].
double round_trip_residual(const PhaseSequence& phases, const EvenPolynomial& p, int points = 100);

struct PhaseTable {
  FilterSpec spec;
  PhaseSequence phases;
  double residual = 0.0;
};

PhaseTable build_phase_table(const FilterSpec& spec, const PhaseSolveOptions& opts = {});
nlohmann::json to_json(const PhaseTable& table);
PhaseTable phase_table_from_json(const nlohmann::json& j);

}  // namespace aqcf

#endif  // AQCF_QSP_HPP_
