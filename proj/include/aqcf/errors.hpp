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

#ifndef AQCF_ERRORS_HPP_
#define AQCF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace aqcf {

// Bad user input: sizes, bounds, config values. CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Anything that fails numerically after the input was accepted. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver hit its cap. Carries the best residual seen.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Projection onto an outcome with vanishing probability.
class PostSelectionError : public NumericalError {
 public:
  PostSelectionError(const std::string& what, double probability)
      : NumericalError(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

// Profiling scan without a usable peak or dip. Exit code 4.
class ProfilingInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aqcf

#endif  // AQCF_ERRORS_HPP_
