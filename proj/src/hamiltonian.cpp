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

#include "aqcf/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "aqcf/errors.hpp"

namespace aqcf {

namespace {

cplx ipow(int k) {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k & 3];
}

using Vec = Eigen::VectorXcd;

std::span<const cplx> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<cplx> as_span(Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

StateVector to_state(int n, const Vec& v) {
  return StateVector(n, std::vector<cplx>(v.data(), v.data() + v.size()));
}

PauliString two_site(int a, int b, Axis axis) { return PauliString{{a, axis}, {b, axis}}; }

}  // namespace

std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::kHeisenberg: return "heisenberg";
    case ModelKind::kIsing: return "tfim";
    case ModelKind::kCustom: return "custom";
  }
  return "custom";
}

ModelKind model_from_name(const std::string& name) {
  if (name == "heisenberg" || name == "hm") return ModelKind::kHeisenberg;
  if (name == "tfim" || name == "ising") return ModelKind::kIsing;
  if (name == "custom") return ModelKind::kCustom;
  throw ConfigError("unknown model '" + name + "' (expected heisenberg or tfim)");
}

std::string ModelSpec::label() const {
  if (kind == ModelKind::kHeisenberg) return "HM L=" + std::to_string(lx);
  return "TFIM " + std::to_string(lx) + "x" + std::to_string(ly);
}

void ModelSpec::validate() const {
  if (kind == ModelKind::kHeisenberg) {
    if (ly != 1) throw ConfigError("heisenberg chain takes a single length");
    if (lx < 4 || lx % 2 != 0) throw ConfigError("heisenberg chain length must be even and >= 4");
  } else if (kind == ModelKind::kIsing) {
    if (lx < 2 || ly < 2) throw ConfigError("tfim lattice dimensions must be >= 2");
  } else {
    throw ConfigError("model spec must name heisenberg or tfim");
  }
  if (num_sites() > kMaxQubits - 1) throw ConfigError("model too large for the statevector");
}

Hamiltonian::Hamiltonian(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)) {
  compile();
}

Hamiltonian::Hamiltonian(int num_qubits, std::vector<PauliTerm> terms, ModelKind model,
                         std::vector<int> dims, Boundary boundary, std::vector<Bond> bonds)
    : num_qubits_(num_qubits),
      terms_(std::move(terms)),
      model_(model),
      dims_(std::move(dims)),
      boundary_(boundary),
      bonds_(std::move(bonds)) {
  std::set<std::pair<int, int>> seen;
  for (const auto& b : bonds_) {
    if (b.a == b.b) throw ConfigError("bond joins a site to itself");
    if (!seen.insert(std::minmax(b.a, b.b)).second) throw ConfigError("duplicate bond");
  }
  compile();
}

void Hamiltonian::compile() {
  if (num_qubits_ < 1 || num_qubits_ > kMaxQubits) throw ConfigError("hamiltonian: bad qubit count");
  compiled_.clear();
  compiled_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coeff)) throw ConfigError("hamiltonian: non-finite coefficient");
    if (t.paulis.max_qubit() >= num_qubits_) throw ConfigError("hamiltonian: term acts outside the register");
    compiled_.push_back({t.paulis.x_mask(), t.paulis.z_mask(), t.coeff * ipow(t.paulis.num_y())});
  }
}

void Hamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
  const std::uint64_t n = std::uint64_t{1} << num_qubits_;
  if (in.size() != n || out.size() != n) throw ConfigError("hamiltonian: dimension mismatch");
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  for (const auto& c : compiled_) {
    for (std::uint64_t b = 0; b < n; ++b) {
      const double sign = (std::popcount(b & c.z_mask) & 1) ? -1.0 : 1.0;
      out[b ^ c.x_mask] += c.factor * sign * in[b];
    }
  }
}

StateVector Hamiltonian::apply(const StateVector& s) const {
  if (s.num_qubits() != num_qubits_) throw ConfigError("hamiltonian: dimension mismatch");
  StateVector out(num_qubits_);
  apply(s.data(), out.data());
  return out;
}

double Hamiltonian::expectation(const StateVector& s) const {
  const StateVector hs = apply(s);
  return inner_product(s, hs).real();
}

Eigen::MatrixXcd Hamiltonian::dense() const {
  if (num_qubits_ > 14) throw ConfigError("dense matrix refused above 14 qubits");
  const std::uint64_t n = std::uint64_t{1} << num_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& c : compiled_) {
    for (std::uint64_t b = 0; b < n; ++b) {
      const double sign = (std::popcount(b & c.z_mask) & 1) ? -1.0 : 1.0;
      m(b ^ c.x_mask, b) += c.factor * sign;
    }
  }
  return m;
}

Hamiltonian Hamiltonian::affine(double scale, double shift) const {
  std::vector<PauliTerm> t;
  t.reserve(terms_.size() + 1);
  for (const auto& term : terms_) t.push_back({scale * term.coeff, term.paulis});
  if (shift != 0.0) t.push_back({shift, PauliString{}});
  return Hamiltonian(num_qubits_, std::move(t), model_, dims_, boundary_, bonds_);
}

nlohmann::json Hamiltonian::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json paulis = nlohmann::json::object();
    for (auto [q, a] : t.paulis.ops()) paulis[std::to_string(q)] = std::string(1, axis_char(a));
    terms.push_back({{"coeff", t.coeff}, {"paulis", paulis}});
  }
  nlohmann::json bonds = nlohmann::json::array();
  for (const auto& b : bonds_) bonds.push_back({b.a, b.b});
  return {{"model", model_name(model_)},
          {"dimensions", dims_},
          {"boundary", boundary_ == Boundary::kPeriodic ? "periodic" : "open"},
          {"num_qubits", num_qubits_},
          {"bonds", bonds},
          {"terms", terms}};
}

Hamiltonian Hamiltonian::from_json(const nlohmann::json& j) {
  try {
    std::vector<PauliTerm> terms;
    int max_q = -1;
    for (const auto& t : j.at("terms")) {
      PauliString p;
      for (auto it = t.at("paulis").begin(); it != t.at("paulis").end(); ++it) {
        const std::string axis = it.value().get<std::string>();
        if (axis.size() != 1) throw ConfigError("hamiltonian json: axis must be one letter");
        p.set(std::stoi(it.key()), axis_from_char(axis[0]));
      }
      max_q = std::max(max_q, p.max_qubit());
      terms.push_back({t.at("coeff").get<double>(), p});
    }
    const int n = j.contains("num_qubits") ? j.at("num_qubits").get<int>() : max_q + 1;
    std::vector<Bond> bonds;
    if (j.contains("bonds")) {
      for (const auto& b : j.at("bonds")) bonds.push_back({b.at(0).get<int>(), b.at(1).get<int>()});
    }
    const std::string boundary = j.value("boundary", "open");
    if (boundary != "open" && boundary != "periodic") throw ConfigError("hamiltonian json: bad boundary");
    return Hamiltonian(n, std::move(terms), model_from_name(j.value("model", "custom")),
                       j.value("dimensions", std::vector<int>{}),
                       boundary == "periodic" ? Boundary::kPeriodic : Boundary::kOpen, std::move(bonds));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("hamiltonian json: ") + e.what());
  }
}

std::vector<Bond> model_bonds(const ModelSpec& spec) {
  spec.validate();
  std::vector<Bond> bonds;
  if (spec.kind == ModelKind::kHeisenberg) {
    for (int k = 0; k < spec.lx; ++k) bonds.push_back({k, (k + 1) % spec.lx});
    return bonds;
  }
  std::set<std::pair<int, int>> seen;
  auto add = [&](int a, int b) {
    if (seen.insert(std::minmax(a, b)).second) bonds.push_back({a, b});
  };
  const int lx = spec.lx, ly = spec.ly;
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) add(x + lx * y, (x + 1) % lx + lx * y);
  }
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) add(x + lx * y, x + lx * ((y + 1) % ly));
  }
  return bonds;
}

std::vector<int> site_degrees(const ModelSpec& spec) {
  std::vector<int> deg(spec.num_sites(), 0);
  for (const auto& b : model_bonds(spec)) {
    ++deg[b.a];
    ++deg[b.b];
  }
  return deg;
}

Hamiltonian build_heisenberg_target(int length) {
  const ModelSpec spec{ModelKind::kHeisenberg, length, 1};
  const auto bonds = model_bonds(spec);
  std::vector<PauliTerm> terms;
  for (const auto& b : bonds) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) terms.push_back({1.0, two_site(b.a, b.b, a)});
  }
  return Hamiltonian(length, std::move(terms), ModelKind::kHeisenberg, {length}, Boundary::kPeriodic, bonds);
}

Hamiltonian build_heisenberg_init(int length) {
  ModelSpec{ModelKind::kHeisenberg, length, 1}.validate();
  std::vector<Bond> bonds;
  std::vector<PauliTerm> terms;
  for (int j = 0; j < length; j += 2) {
    bonds.push_back({j, j + 1});
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) terms.push_back({1.0, two_site(j, j + 1, a)});
  }
  return Hamiltonian(length, std::move(terms), ModelKind::kHeisenberg, {length}, Boundary::kPeriodic, bonds);
}

Hamiltonian build_tfim_target(int lx, int ly) {
  const ModelSpec spec{ModelKind::kIsing, lx, ly};
  const auto bonds = model_bonds(spec);
  std::vector<PauliTerm> terms;
  for (int j = 0; j < spec.num_sites(); ++j) terms.push_back({1.0, PauliString{{j, Axis::X}}});
  for (const auto& b : bonds) terms.push_back({-1.0, two_site(b.a, b.b, Axis::Z)});
  return Hamiltonian(spec.num_sites(), std::move(terms), ModelKind::kIsing, {lx, ly}, Boundary::kPeriodic, bonds);
}

Hamiltonian build_tfim_init(int lx, int ly) {
  const ModelSpec spec{ModelKind::kIsing, lx, ly};
  spec.validate();
  std::vector<PauliTerm> terms;
  for (int j = 0; j < spec.num_sites(); ++j) terms.push_back({1.0, PauliString{{j, Axis::X}}});
  return Hamiltonian(spec.num_sites(), std::move(terms), ModelKind::kIsing, {lx, ly}, Boundary::kPeriodic, {});
}

Hamiltonian target_hamiltonian(const ModelSpec& spec) {
  spec.validate();
  return spec.kind == ModelKind::kHeisenberg ? build_heisenberg_target(spec.lx)
                                             : build_tfim_target(spec.lx, spec.ly);
}

Hamiltonian initial_hamiltonian(const ModelSpec& spec) {
  spec.validate();
  return spec.kind == ModelKind::kHeisenberg ? build_heisenberg_init(spec.lx)
                                             : build_tfim_init(spec.lx, spec.ly);
}

Hamiltonian interpolated_hamiltonian(const ModelSpec& spec, double s) {
  std::map<PauliString, double> acc;
  for (const auto& t : initial_hamiltonian(spec).terms()) acc[t.paulis] += (1.0 - s) * t.coeff;
  for (const auto& t : target_hamiltonian(spec).terms()) acc[t.paulis] += s * t.coeff;
  std::vector<PauliTerm> terms;
  for (const auto& [p, c] : acc) {
    if (c != 0.0) terms.push_back({c, p});
  }
  return Hamiltonian(spec.num_sites(), std::move(terms));
}

StateVector initial_state(const ModelSpec& spec) {
  spec.validate();
  const int n = spec.num_sites();
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<cplx> amps(dim, cplx{0.0, 0.0});
  if (spec.kind == ModelKind::kHeisenberg) {
    // (|01> - |10>)/sqrt2 on each pair; bit 2j is the first site of the pair.
    const double norm = std::pow(0.5, n / 4.0);
    for (std::uint64_t b = 0; b < dim; ++b) {
      double v = norm;
      for (int j = 0; j < n && v != 0.0; j += 2) {
        const int lo = (b >> j) & 1, hi = (b >> (j + 1)) & 1;
        if (lo == hi) v = 0.0;
        else if (lo == 1) v = -v;
      }
      amps[b] = v;
    }
  } else {
    const double norm = std::pow(0.5, n / 2.0);
    for (std::uint64_t b = 0; b < dim; ++b) amps[b] = (std::popcount(b) & 1) ? -norm : norm;
  }
  return StateVector(n, std::move(amps));
}

double initial_energy(const ModelSpec& spec) {
  spec.validate();
  return spec.kind == ModelKind::kHeisenberg ? -3.0 * (spec.lx / 2) : -1.0 * spec.num_sites();
}

EigenSolution lowest_eigenpairs(const Hamiltonian& h, int k, const LanczosOptions& opts) {
  const int nq = h.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << nq;
  if (k < 1 || k > dim) throw ConfigError("eigen-solver: k must lie in [1, 2^n]");
  auto matvec = [&](const Vec& x, Vec& y) { h.apply(as_span(x), as_span(y)); };

  // Keep the Krylov basis under ~1 GiB.
  const Eigen::Index mem_cap = std::max<Eigen::Index>(16, (Eigen::Index{1} << 30) / (16 * dim));
  std::vector<Vec> locked;
  const Rng base(opts.seed);

  auto orth_locked = [&](Vec& v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : locked) v -= q * q.dot(v);
    }
  };

  Vec y(dim);
  while (static_cast<int>(locked.size()) < k) {
    Rng rng = base.split(locked.size());
    Vec start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) start[i] = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    orth_locked(start);
    start.normalize();

    const Eigen::Index room = dim - static_cast<Eigen::Index>(locked.size());
    const Eigen::Index mmax = std::min<Eigen::Index>({opts.krylov_dim, mem_cap, room});
    int matvecs = 0;
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
      Eigen::MatrixXcd basis(dim, mmax);
      std::vector<double> alpha, beta;
      Vec v = start;
      Eigen::VectorXd ritz_vec;
      double theta = 0.0;
      Eigen::Index m = 0;
      for (Eigen::Index j = 0; j < mmax; ++j) {
        basis.col(j) = v;
        matvec(v, y);
        ++matvecs;
        const double a = v.dot(y).real();
        alpha.push_back(a);
        Vec w = y;
        // Full reorthogonalization, applied twice.
        for (int pass = 0; pass < 2; ++pass) {
          w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
          orth_locked(w);
        }
        const double b = w.norm();
        m = j + 1;
        const bool exhausted = b < 1e-12 * std::max(1.0, std::abs(a));
        if (exhausted || m == mmax || m % 10 == 0) {
          Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
          Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                      : Eigen::VectorXd();
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
          tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
          theta = tri.eigenvalues()[0];
          ritz_vec = tri.eigenvectors().col(0);
          if (exhausted || b * std::abs(ritz_vec[m - 1]) < 0.01 * opts.tolerance) break;
        }
        if (m == mmax) break;
        beta.push_back(b);
        v = w / b;
      }
      Vec x = basis.leftCols(m) * ritz_vec.cast<cplx>();
      orth_locked(x);
      x.normalize();
      matvec(x, y);
      ++matvecs;
      theta = x.dot(y).real();
      const double res = (y - theta * x).norm();
      best = std::min(best, res);
      if (res <= 0.1 * opts.tolerance) {
        locked.push_back(x);
        break;
      }
      if (matvecs >= opts.max_matvecs) {
        throw SolverError("eigen-solver: no convergence for eigenpair " + std::to_string(locked.size()) +
                              " within " + std::to_string(opts.max_matvecs) + " matvecs",
                          best);
      }
      start = x;
    }
  }

  // Rayleigh-Ritz over the locked set.
  Eigen::MatrixXcd q(dim, k), hq(dim, k);
  for (int i = 0; i < k; ++i) {
    q.col(i) = locked[i];
    Vec col = hq.col(i);
    matvec(locked[i], col);
    hq.col(i) = col;
  }
  Eigen::MatrixXcd small = q.adjoint() * hq;
  small = 0.5 * (small + small.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rr(small);
  const Eigen::MatrixXcd vecs = q * rr.eigenvectors();
  EigenSolution out;
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    Vec v = vecs.col(i);
    v.normalize();
    matvec(v, y);
    const double lam = v.dot(y).real();
    const double res = (y - lam * v).norm();
    worst = std::max(worst, res);
    out.values.push_back(lam);
    out.vectors.push_back(to_state(nq, v));
    out.residuals.push_back(res);
  }
  if (worst > opts.tolerance) {
    throw SolverError("eigen-solver: residual above tolerance after Rayleigh-Ritz", worst);
  }
  return out;
}

EigenSolution dense_eigenpairs(const Hamiltonian& h, int k) {
  const Eigen::MatrixXcd m = h.dense();
  if (k < 1 || k > m.rows()) throw ConfigError("eigen-solver: k must lie in [1, 2^n]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigen-solver failed");
  EigenSolution out;
  for (int i = 0; i < k; ++i) {
    Vec v = es.eigenvectors().col(i);
    out.values.push_back(es.eigenvalues()[i]);
    out.residuals.push_back((m * v - es.eigenvalues()[i] * v).norm());
    out.vectors.push_back(to_state(h.num_qubits(), v));
  }
  return out;
}

std::vector<SpectrumLevel> fidelity_spectrum(const StateVector& s, const EigenSolution& eig,
                                             double degeneracy_tol) {
  std::vector<SpectrumLevel> levels;
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    const double f = fidelity(eig.vectors[j], s);
    if (!levels.empty() && std::abs(eig.values[j] - eig.values[j - 1]) < degeneracy_tol) {
      levels.back().fidelity += f;
      ++levels.back().degeneracy;
    } else {
      levels.push_back({eig.values[j], f, 1});
    }
  }
  return levels;
}

std::vector<SpectrumLevel> fidelity_spectrum(const Hamiltonian& h, const StateVector& s, int k) {
  return fidelity_spectrum(s, lowest_eigenpairs(h, k));
}

}  // namespace aqcf
