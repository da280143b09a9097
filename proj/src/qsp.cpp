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

#include "aqcf/qsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "aqcf/errors.hpp"
#include "aqcf/rng.hpp"

namespace aqcf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGridSteps = 10000;

using Mat2 = Eigen::Matrix2cd;

Mat2 rot_x(double phi) {
  Mat2 r;
  const cplx c = std::cos(phi), is = cplx(0.0, std::sin(phi));
  r << c, is, is, c;
  return r;
}

// Slot j = 1..eta: odd slots carry exp(-i l) on |1>, even slots exp(+i l).
Mat2 slot(int j, double lambda_tilde) {
  Mat2 a = Mat2::Identity();
  a(1, 1) = std::exp(cplx(0.0, (j % 2 == 1 ? -1.0 : 1.0) * lambda_tilde));
  return a;
}

Mat2 circuit_matrix(const std::vector<double>& phases, double lambda_tilde) {
  Mat2 m = rot_x(phases[0]);
  for (std::size_t j = 1; j < phases.size(); ++j) m = (rot_x(phases[j]) * slot(j, lambda_tilde) * m).eval();
  return m;
}

std::vector<double> expand_half(const Eigen::VectorXd& h) {
  const int m = static_cast<int>(h.size());
  std::vector<double> full(2 * m - 1);
  for (int i = 0; i < m; ++i) {
    full[i] = h[i];
    full[2 * m - 2 - i] = h[i];
  }
  return full;
}

double erf_step(double x, double mu, double k) {
  return 1.0 + 0.5 * (std::erf(k * (x - mu)) - std::erf(k * (x + mu)));
}

EvenPolynomial interpolate_even(const std::vector<double>& nodes, const std::vector<double>& values) {
  const int m = static_cast<int>(nodes.size());
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for (int j = 0; j < m; ++j) {
    const double theta = std::acos(nodes[j]);
    for (int k = 0; k < m; ++k) a(j, k) = std::cos(2.0 * k * theta);
    b[j] = values[j];
  }
  Eigen::VectorXd c = a.fullPivLu().solve(b);
  return EvenPolynomial(std::vector<double>(c.data(), c.data() + m));
}

double max_abs_on_grid(const EvenPolynomial& p) {
  double mx = 0.0;
  for (int i = 0; i <= kGridSteps; ++i) mx = std::max(mx, std::abs(p(static_cast<double>(i) / kGridSteps)));
  return mx;
}

// Residuals F(x_k) - target(x_k) over the half-phase vector.
struct PhaseFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::vector<double> lambdas;  // 2 acos(x_k)
  std::vector<double> targets;
  int half;

  int inputs() const { return half; }
  int values() const { return static_cast<int>(lambdas.size()); }

  int operator()(const Eigen::VectorXd& h, Eigen::VectorXd& f) const {
    const auto full = expand_half(h);
    for (int k = 0; k < values(); ++k) f[k] = circuit_matrix(full, lambdas[k])(0, 0).real() - targets[k];
    return 0;
  }

  int df(const Eigen::VectorXd& h, Eigen::MatrixXd& jac) const {
    const auto full = expand_half(h);
    const int n = static_cast<int>(full.size());
    const Mat2 ix = (Mat2() << 0, cplx(0, 1), cplx(0, 1), 0).finished();
    std::vector<Mat2> before(n), after(n);
    for (int k = 0; k < values(); ++k) {
      const double l = lambdas[k];
      // before[j]: everything applied ahead of R(phi_j); after[j]: everything behind it.
      before[0] = Mat2::Identity();
      for (int j = 1; j < n; ++j) before[j] = (slot(j, l) * rot_x(full[j - 1]) * before[j - 1]).eval();
      after[n - 1] = Mat2::Identity();
      for (int j = n - 2; j >= 0; --j) after[j] = (after[j + 1] * rot_x(full[j + 1]) * slot(j + 1, l)).eval();
      for (int i = 0; i < half; ++i) {
        double d = (after[i] * ix * rot_x(full[i]) * before[i])(0, 0).real();
        const int mirror = n - 1 - i;
        if (mirror != i) d += (after[mirror] * ix * rot_x(full[mirror]) * before[mirror])(0, 0).real();
        jac(k, i) = d;
      }
    }
    return 0;
  }
};

}  // namespace

double FilterSpec::cutoff_angle() const { return 2.0 * std::acos(mu); }

void FilterSpec::validate() const {
  if (eta < 0 || eta % 2 != 0) throw ConfigError("filter: eta must be a non-negative even integer");
  if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("filter: mu must lie in (0, 1)");
  const double w = transition_width();
  if (!(mu - w > 0.0 && mu + w < 1.0)) throw ConfigError("filter: mu +- width must stay inside (0, 1)");
}

double shifted_sign(double x, double mu) {
  const double a = std::abs(x);
  if (a > mu) return 1.0;
  if (a < mu) return 0.0;
  return 0.5;
}

EvenPolynomial::EvenPolynomial(std::vector<double> even_cheb) : c_(std::move(even_cheb)) {}

double EvenPolynomial::operator()(double x) const {
  // Clenshaw in y = T_2(x) = 2x^2 - 1, since T_{2k}(x) = T_k(y).
  const double y = 2.0 * x * x - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c_.size()) - 1; k >= 1; --k) {
    const double b0 = c_[k] + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c_.empty() ? 0.0 : c_[0] + y * b1 - b2;
}

std::vector<double> positive_chebyshev_nodes(int m) {
  std::vector<double> x(m);
  for (int j = 0; j < m; ++j) x[j] = std::cos((2.0 * j + 1.0) * kPi / (4.0 * m));
  return x;
}

double band_error(const EvenPolynomial& p, const FilterSpec& spec) {
  const double w = spec.transition_width();
  double err = 0.0;
  for (int i = 0; i <= kGridSteps; ++i) {
    const double x = static_cast<double>(i) / kGridSteps;
    if (std::abs(x - spec.mu) <= w) continue;
    const double d = std::abs(p(x) - shifted_sign(x, spec.mu));
    if (std::isnan(d)) return d;
    err = std::max(err, d);
  }
  return err;
}

namespace {

// Scans the erf steepness for Chebyshev interpolants of degree 2(m - 1),
// keeping the candidate with the smallest band error. Candidates that
// vanish on the grid (every node far below mu) cannot be rescaled.
void scan_steepness(const FilterSpec& spec, int m, StepDesign& best) {
  const auto nodes = positive_chebyshev_nodes(m);
  constexpr int kScan = 400;
  constexpr double kLo = 0.5, kHi = 2000.0;
  const double w = spec.transition_width();
  std::vector<double> vals(m), grid(kGridSteps + 1);
  for (int i = 0; i < kScan; ++i) {
    const double k = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kScan - 1));
    for (int j = 0; j < m; ++j) vals[j] = erf_step(nodes[j], spec.mu, k);
    EvenPolynomial p = interpolate_even(nodes, vals);
    double peak = 0.0;
    for (int g = 0; g <= kGridSteps; ++g) {
      grid[g] = p(static_cast<double>(g) / kGridSteps);
      peak = std::max(peak, std::abs(grid[g]));
    }
    if (!(peak > 1e-6) || !std::isfinite(peak)) continue;
    const double scale = 0.99 / peak;
    // Same points and exclusion rule as band_error().
    double err = 0.0;
    for (int g = 0; g <= kGridSteps && err < best.band_error; ++g) {
      const double x = static_cast<double>(g) / kGridSteps;
      if (std::abs(x - spec.mu) <= w) continue;
      err = std::max(err, std::abs(scale * grid[g] - shifted_sign(x, spec.mu)));
    }
    if (err < best.band_error) {
      auto c = p.coefficients();
      for (auto& v : c) v *= scale;
      best = {EvenPolynomial(std::move(c)), k, err, false};
    }
  }
}

}  // namespace

StepDesign design_step_polynomial(const FilterSpec& spec) {
  spec.validate();
  if (spec.eta == 0) return {EvenPolynomial({1.0}), 0.0, band_error(EvenPolynomial({1.0}), spec), true};
  // Even polynomials of degree eta contain every lower-degree design, so
  // the lower degrees are candidates too; this keeps the band error
  // non-increasing in eta.
  StepDesign best{EvenPolynomial(), 0.0, std::numeric_limits<double>::infinity(), true};
  for (int m = 2; m <= spec.eta / 2 + 1; ++m) scan_steepness(spec, m, best);
  if (!std::isfinite(best.band_error)) throw SolverError("filter design: no usable step polynomial", best.band_error);
  auto c = best.poly.coefficients();
  c.resize(spec.eta / 2 + 1, 0.0);
  best.poly = EvenPolynomial(std::move(c));
  best.band_error = band_error(best.poly, spec);
  best.flagged = best.band_error > 0.45;
  return best;
}

bool PhaseSequence::palindromic() const {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i] != phases[phases.size() - 1 - i]) return false;
  }
  return true;
}

void PhaseSequence::validate() const {
  if (phases.empty() || eta() % 2 != 0) throw ConfigError("phases: need an odd number of angles (eta + 1, eta even)");
  for (double p : phases) {
    if (!std::isfinite(p)) throw ConfigError("phases: non-finite angle");
  }
  if (!palindromic()) throw ConfigError("phases: sequence must be palindromic");
}

cplx qetu_matrix_element(const std::vector<double>& phases, double lambda_tilde) {
  if (phases.empty()) throw ConfigError("phases: empty sequence");
  return circuit_matrix(phases, lambda_tilde)(0, 0);
}

double evaluate_filter(const PhaseSequence& phases, double x) {
  if (!(std::abs(x) <= 1.0)) throw ConfigError("filter: x must lie in [-1, 1]");
  return qetu_matrix_element(phases.phases, 2.0 * std::acos(x)).real();
}

double filter_profile(const PhaseSequence& phases, double lambda_tilde) {
  return qetu_matrix_element(phases.phases, lambda_tilde).real();
}

PhaseSolution solve_symmetric_phases(const EvenPolynomial& target, int eta, const PhaseSolveOptions& opts) {
  if (eta < 0 || eta % 2 != 0) throw ConfigError("phase solver: eta must be even");
  if (target.degree() > eta) throw ConfigError("phase solver: target degree exceeds eta");
  const int m = eta / 2 + 1;
  const auto nodes = positive_chebyshev_nodes(m);
  PhaseFunctor fn;
  fn.half = m;
  for (double x : nodes) {
    fn.lambdas.push_back(2.0 * std::acos(x));
    fn.targets.push_back(target(x));
  }
  auto node_residual = [&](const Eigen::VectorXd& h) {
    Eigen::VectorXd f(m);
    fn(h, f);
    return f.cwiseAbs().maxCoeff();
  };

  // Constant 1: the all-zero sequence telescopes to the identity.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  if (node_residual(zero) <= opts.tolerance) return {PhaseSequence::zeros(eta), node_residual(zero), 0};

  // Start: phi_0 = 0 and pi/2 elsewhere. All-zero is a stationary point of
  // the fit and cannot be used.
  Eigen::VectorXd start = Eigen::VectorXd::Constant(m, kPi / 2.0);
  start[0] = 0.0;
  Rng rng(opts.seed);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_h = start;
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    Eigen::VectorXd h = start;
    if (attempt > 0) {
      for (int i = 0; i < m; ++i) h[i] += 0.2 * (rng.uniform() - 0.5);
    }
    Eigen::LevenbergMarquardt<PhaseFunctor> lm(fn);
    lm.parameters.ftol = 1e-16;
    lm.parameters.xtol = 1e-16;
    lm.parameters.maxfev = 200 * (m + 1);
    lm.minimize(h);
    const double r = node_residual(h);
    if (r < best) {
      best = r;
      best_h = h;
    }
    if (r <= opts.tolerance) {
      PhaseSequence seq{expand_half(h)};
      return {seq, r, attempt};
    }
  }
  throw SolverError("phase solver: residual " + std::to_string(best) + " above tolerance after restarts", best);
}

double round_trip_residual(const PhaseSequence& phases, const EvenPolynomial& p, int points) {
  double err = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = -1.0 + 2.0 * i / (points - 1);
    const double d = std::abs(evaluate_filter(phases, x) - p(x));
    if (std::isnan(d)) return d;
    err = std::max(err, d);
  }
  return err;
}

PhaseTable build_phase_table(const FilterSpec& spec, const PhaseSolveOptions& opts) {
  spec.validate();
  const StepDesign d = design_step_polynomial(spec);
  const PhaseSolution sol = solve_symmetric_phases(d.poly, spec.eta, opts);
  return {spec, sol.phases, round_trip_residual(sol.phases, d.poly)};
}

nlohmann::json to_json(const PhaseTable& t) {
  return {{"eta", t.spec.eta},
          {"mu", t.spec.mu},
          {"width", t.spec.transition_width()},
          {"phases", t.phases.phases},
          {"residual", t.residual}};
}

PhaseTable phase_table_from_json(const nlohmann::json& j) {
  try {
    PhaseTable t;
    t.spec.eta = j.at("eta").get<int>();
    t.spec.mu = j.at("mu").get<double>();
    t.spec.width = j.value("width", -1.0);
    t.phases.phases = j.at("phases").get<std::vector<double>>();
    t.residual = j.value("residual", 0.0);
    t.spec.validate();
    t.phases.validate();
    if (t.phases.eta() != t.spec.eta) throw ConfigError("phase table: phases length must be eta + 1");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("phase table json: ") + e.what());
  }
}

}  // namespace aqcf
