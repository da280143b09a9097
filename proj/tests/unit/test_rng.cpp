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
#include <set>

#include <gtest/gtest.h>

#include "aqcf/errors.hpp"
#include "aqcf/rng.hpp"

namespace aqcf {
namespace {

TEST(Rng, SameSeedAndStreamRepeat) {
  Rng a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsAndSplitsDiffer) {
  Rng base(42);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t k = 0; k < 64; ++k) firsts.insert(base.split(k).next_u64());
  firsts.insert(Rng(42, 1).next_u64());
  firsts.insert(Rng(43).next_u64());
  EXPECT_EQ(firsts.size(), 66u);
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(7), b(7);
  (void)a.split(5);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformRangeAndMean) {
  Rng r(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sigma of the mean is sqrt(1/12/n) ~ 6.5e-4.
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, BinomialEdgesAndMean) {
  Rng r(2);
  EXPECT_EQ(r.binomial(100, 0.0), 0);
  EXPECT_EQ(r.binomial(100, 1.0), 100);
  EXPECT_EQ(r.binomial(0, 0.5), 0);
  const int n = 10000;
  const double p = 0.3;
  const double k = static_cast<double>(r.binomial(n, p));
  EXPECT_NEAR(k / n, p, 5 * std::sqrt(p * (1 - p) / n));
  EXPECT_THROW(r.binomial(-1, 0.5), ConfigError);
  EXPECT_THROW(r.binomial(10, 1.5), ConfigError);
}

TEST(Rng, Splitmix64KnownValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

}  // namespace
}  // namespace aqcf
