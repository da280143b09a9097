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

#ifndef AQCF_RNG_HPP_
#define AQCF_RNG_HPP_

#include <cstdint>
#include <random>

namespace aqcf {

// Seedable, splittable generator. mt19937_64 is fully specified by the
// standard, and uniform() avoids the library distributions, so a given
// (seed, stream) yields the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Independent child stream keyed by `index`.
  Rng split(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Number of successes in n Bernoulli(p) trials.
  std::int64_t binomial(std::int64_t n, double p);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace aqcf

#endif  // AQCF_RNG_HPP_
