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

// Spectral profiling: success probability of a deep filter as one rescaling
// bound sweeps a grid while the other is held fixed.

#ifndef AQCF_PROFILING_HPP_
#define AQCF_PROFILING_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqcf/hamiltonian.hpp"
#include "aqcf/qetu.hpp"
#include "aqcf/qsp.hpp"

namespace aqcf {

struct ScanPoint {
  double lambda;
  double p_hat;
  double stderr_;  // sqrt(p_hat (1 - p_hat) / shots); 0 in exact mode
  std::optional<double> p_exact;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  int shots = 0;  // 0: exact probabilities

  std::vector<double> grid() const;
  std::vector<double> values() const;
  // Columns lambda,p_hat,stderr,p_exact.
  std::string to_csv() const;
};

struct ScanConfig {
  std::vector<double> grid;  // strictly ascending
  double fixed_bound = 0.0;
  int shots = 3000;          // 0 selects exact probabilities
  std::uint64_t seed = 0;
};

// What a scan needs besides the input state: the model, how U is applied,
// and the phases of the profiling filter (solved once).
struct ScanContext {
  ModelSpec model;
  EvolutionMode mode = EvolutionMode::kExact;
  FilterSpec filter{12, 0.8};
  PhaseSequence phases;
  std::shared_ptr<const DenseSpectrum> spectrum;  // exact mode, n <= 12

  static ScanContext make(const ModelSpec& model, const FilterSpec& filter, EvolutionMode mode);
  static ScanContext make(const ModelSpec& model, const PhaseTable& table, EvolutionMode mode);
  ControlledU evolution(const RescaleBounds& bounds) const;
};

// Grid sweeps lambda_min with lambda_max = fixed_bound. Point i draws its
// shots from stream (seed, i).
ScanResult scan_lower_bound(const StateVector& input, const ScanContext& ctx, const ScanConfig& cfg);
// Grid sweeps lambda_max with lambda_min = fixed_bound.
ScanResult scan_upper_bound(const StateVector& input, const ScanContext& ctx, const ScanConfig& cfg);

// 3-point moving average; the end points average their single neighbour.
std::vector<double> smooth3(const std::vector<double>& y);

// Peak: raw maximum inside the leftmost run of points at or above 80% of
// the smoothed maximum. Returns the grid value one spacing left of it.
double select_lower_bound(const ScanResult& scan);
// Scanning down from the top, the first point below 50% of the smoothed
// maximum is the dip; returns the grid value one spacing above it.
double select_upper_bound(const ScanResult& scan);

struct ProfileConfig {
  std::vector<double> lower_grid;
  double lower_fixed_max = 0.0;
  std::vector<double> upper_grid;  // only values above lambda_LB are scanned
  FilterSpec filter{12, 0.8};
  int shots = 3000;
  std::uint64_t seed = 0;

  // HM L=8: lower grid -40..-5, lambda_max 0, upper grid -15..10 (step 5).
  // Otherwise lower grid [lo, 0) and upper grid (lo, 0] with 32 intervals,
  // lo = min(2 E_init, -sum |c|), E_init being the analytic initial energy.
  static ProfileConfig defaults_for(const ModelSpec& model);
};

struct ProfileResult {
  ScanResult lower;
  ScanResult upper;
  double lambda_lb;
  double lambda_ub;
};

ProfileResult profile_spectrum(const StateVector& input, const ScanContext& ctx, const ProfileConfig& cfg);

// Bounds read off the exact spectrum instead of scans: lambda_LB one
// spacing below lambda_0 and lambda_UB one spacing above the highest level
// holding at least `threshold` of the state, both snapped to multiples of
// `spacing`. Throws ProfilingInconclusive when `eig` covers less than 99%
// of the state.
struct SpectrumBoundsSpec {
  double threshold = 1e-3;
  double spacing = 1.0;
  int eigenpairs = 48;
};
RescaleBounds bounds_from_spectrum(const StateVector& state, const EigenSolution& eig,
                                   const SpectrumBoundsSpec& spec = {});

// Evenly spaced grid from `lo` to `hi` inclusive.
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace aqcf

#endif  // AQCF_PROFILING_HPP_
