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

#include "aqcf/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "aqcf/errors.hpp"
#include "aqcf/rng.hpp"

namespace aqcf {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("scan: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("scan: grid must be strictly ascending");
  }
  if (grid.size() >= 2) {
    // Uniform spacing is what the one-spacing offsets assume.
    const double h = grid[1] - grid[0];
    for (std::size_t i = 2; i < grid.size(); ++i) {
      if (std::abs(grid[i] - grid[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) {
        throw ConfigError("scan: grid spacing must be uniform");
      }
    }
  }
}

ScanPoint measure(const StateVector& input, const ScanContext& ctx, const RescaleBounds& b, double lambda,
                  int shots, Rng rng) {
  const double p = std::clamp(qetu_success_probability(input, ctx.phases, ctx.evolution(b)), 0.0, 1.0);
  if (shots == 0) return {lambda, p, 0.0, p};
  const double p_hat = static_cast<double>(rng.binomial(shots, p)) / shots;
  return {lambda, p_hat, std::sqrt(p_hat * (1.0 - p_hat) / shots), p};
}

void check_contrast(const ScanResult& scan, const std::vector<double>& s, const char* which) {
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  double mean_se = 0.0;
  for (const auto& p : scan.points) mean_se += p.stderr_;
  mean_se /= static_cast<double>(scan.points.size());
  if (*hi - *lo < std::max(0.05, 3.0 * mean_se)) {
    throw ProfilingInconclusive(std::string(which) +
                                ": success probability is flat within noise; widen the grid or "
                                "lengthen the adiabatic evolution");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::vector<double> ScanResult::grid() const {
  std::vector<double> g;
  for (const auto& p : points) g.push_back(p.lambda);
  return g;
}

std::vector<double> ScanResult::values() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.p_hat);
  return v;
}

std::string ScanResult::to_csv() const {
  std::ostringstream os;
  os << "lambda,p_hat,stderr,p_exact\n";
  for (const auto& p : points) {
    os << fmt(p.lambda) << ',' << fmt(p.p_hat) << ',' << fmt(p.stderr_) << ','
       << (p.p_exact ? fmt(*p.p_exact) : std::string()) << '\n';
  }
  return os.str();
}

ScanContext ScanContext::make(const ModelSpec& model, const FilterSpec& filter, EvolutionMode mode) {
  return make(model, build_phase_table(filter), mode);
}

ScanContext ScanContext::make(const ModelSpec& model, const PhaseTable& table, EvolutionMode mode) {
  model.validate();
  ScanContext ctx;
  ctx.model = model;
  ctx.mode = mode;
  ctx.filter = table.spec;
  ctx.phases = table.phases;
  if (mode == EvolutionMode::kExact && model.num_sites() <= kDenseLimit) {
    ctx.spectrum = dense_spectrum(target_hamiltonian(model));
  }
  return ctx;
}

ControlledU ScanContext::evolution(const RescaleBounds& bounds) const {
  if (mode == EvolutionMode::kTrotter) return ControlledU::trotterized(model, bounds);
  return ControlledU::exact(target_hamiltonian(model), bounds, spectrum);
}

ScanResult scan_lower_bound(const StateVector& input, const ScanContext& ctx, const ScanConfig& cfg) {
  check_grid(cfg.grid);
  if (cfg.shots < 0) throw ConfigError("scan: shots must be >= 0");
  const double spacing = cfg.grid.size() > 1 ? cfg.grid[1] - cfg.grid[0] : 0.0;
  if (cfg.fixed_bound < cfg.grid.back() + spacing - 1e-9) {
    throw ConfigError("lower scan: lambda_max must exceed the grid by at least one spacing");
  }
  ScanResult out;
  out.shots = cfg.shots;
  const Rng base(cfg.seed, 1);
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    out.points.push_back(
        measure(input, ctx, {cfg.grid[i], cfg.fixed_bound}, cfg.grid[i], cfg.shots, base.split(i)));
  }
  return out;
}

ScanResult scan_upper_bound(const StateVector& input, const ScanContext& ctx, const ScanConfig& cfg) {
  check_grid(cfg.grid);
  if (cfg.shots < 0) throw ConfigError("scan: shots must be >= 0");
  if (!(cfg.grid.front() > cfg.fixed_bound)) throw ConfigError("upper scan: grid must lie above lambda_LB");
  ScanResult out;
  out.shots = cfg.shots;
  const Rng base(cfg.seed, 2);
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    out.points.push_back(
        measure(input, ctx, {cfg.fixed_bound, cfg.grid[i]}, cfg.grid[i], cfg.shots, base.split(i)));
  }
  return out;
}

std::vector<double> smooth3(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += y[j];
    s[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return s;
}

double select_lower_bound(const ScanResult& scan) {
  if (scan.points.size() < 5) throw ConfigError("lower-bound selection needs at least 5 grid points");
  const auto y = scan.values();
  const auto g = scan.grid();
  const auto s = smooth3(y);
  check_contrast(scan, s, "lower scan");
  const double thr = 0.8 * *std::max_element(s.begin(), s.end());
  std::size_t i = 0;
  while (i < y.size() && y[i] < thr) ++i;
  if (i == y.size()) throw ProfilingInconclusive("lower scan: no point reaches the onset threshold");
  if (i == 0) {
    throw ProfilingInconclusive("lower scan: already on the plateau at the first grid point; extend the grid to "
                                "lower energies");
  }
  std::size_t peak = i;
  for (std::size_t j = i; j < y.size() && y[j] >= thr; ++j) {
    if (y[j] > y[peak]) peak = j;
  }
  if (peak == 0) {
    throw ProfilingInconclusive("lower scan: peak at the first grid point; extend the grid to lower energies");
  }
  return g[peak - 1];
}

double select_upper_bound(const ScanResult& scan) {
  if (scan.points.size() < 5) throw ConfigError("upper-bound selection needs at least 5 grid points");
  const auto y = scan.values();
  const auto g = scan.grid();
  const auto s = smooth3(y);
  check_contrast(scan, s, "upper scan");
  const double thr = 0.5 * *std::max_element(s.begin(), s.end());
  std::size_t i = y.size();
  while (i > 0 && y[i - 1] >= thr) --i;
  if (i == 0) throw ProfilingInconclusive("upper scan: no dip below the plateau");
  const std::size_t dip = i - 1;
  if (dip + 1 >= y.size()) {
    throw ProfilingInconclusive("upper scan: dip at the top of the grid; extend the grid upward");
  }
  return g[dip + 1];
}

ProfileConfig ProfileConfig::defaults_for(const ModelSpec& model) {
  ProfileConfig cfg;
  if (model.kind == ModelKind::kHeisenberg && model.lx == 8) {
    cfg.lower_grid = make_grid(-40.0, -5.0, 5.0);
    cfg.lower_fixed_max = 0.0;
    cfg.upper_grid = make_grid(-15.0, 10.0, 5.0);
    return cfg;
  }
  // sum |c| bounds |lambda_0| from above; 2 E_init alone can sit above the
  // ground energy (TFIM: -2n versus about -2.1n).
  double norm_bound = 0.0;
  for (const auto& t : target_hamiltonian(model).terms()) norm_bound += std::abs(t.coeff);
  const double lo = std::min(2.0 * initial_energy(model), -norm_bound);
  const double step = -lo / 32.0;
  cfg.lower_grid = make_grid(lo, -step, step);
  cfg.lower_fixed_max = 0.0;
  cfg.upper_grid = make_grid(lo + step, 0.0, step);
  return cfg;
}

ProfileResult profile_spectrum(const StateVector& input, const ScanContext& ctx, const ProfileConfig& cfg) {
  ProfileResult r;
  r.lower = scan_lower_bound(input, ctx, {cfg.lower_grid, cfg.lower_fixed_max, cfg.shots, cfg.seed});
  r.lambda_lb = select_lower_bound(r.lower);
  std::vector<double> upper;
  for (double v : cfg.upper_grid) {
    if (v > r.lambda_lb) upper.push_back(v);
  }
  if (upper.size() < 5) throw ProfilingInconclusive("upper scan: fewer than 5 grid points above lambda_LB");
  r.upper = scan_upper_bound(input, ctx, {upper, r.lambda_lb, cfg.shots, cfg.seed});
  r.lambda_ub = select_upper_bound(r.upper);
  return r;
}

RescaleBounds bounds_from_spectrum(const StateVector& state, const EigenSolution& eig,
                                   const SpectrumBoundsSpec& spec) {
  if (!(spec.spacing > 0.0) || !(spec.threshold > 0.0 && spec.threshold < 1.0)) {
    throw ConfigError("spectrum bounds: need spacing > 0 and 0 < threshold < 1");
  }
  if (eig.values.empty()) throw ConfigError("spectrum bounds: no eigenpairs");
  double covered = 0.0;
  double top = eig.values.front();
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    const double f = fidelity(eig.vectors[j], state);
    covered += f;
    if (f >= spec.threshold) top = std::max(top, eig.values[j]);
  }
  if (covered < 0.99) {
    throw ProfilingInconclusive("spectrum bounds: the eigenpairs cover only " + fmt(covered) +
                                " of the state; request more eigenpairs");
  }
  const double h = spec.spacing;
  return {h * std::floor(eig.values.front() / h) - h, h * std::ceil(top / h) + h};
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ConfigError("grid: need lo <= hi and step > 0");
  const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> g;
  for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
  return g;
}

}  // namespace aqcf
