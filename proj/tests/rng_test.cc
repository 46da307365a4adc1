// Copyright 2026 The bab Authors. All Rights Reserved.
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

#include "bab/rng.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace bab::rng {
namespace {

TEST(Mix64Test, PublishedSplitMix64Sequence) {
  // First outputs of the reference SplitMix64 generator seeded with 0.
  Stream s(0);
  EXPECT_EQ(s.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(s.Next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(s.Next(), 0x06c45d188009454fULL);
  EXPECT_EQ(Mix64(0), 0xe220a8397b1dcdafULL);
}

TEST(HashStringTest, StableAndSensitive) {
  EXPECT_EQ(HashString("gender"), HashString(std::string("gen") + "der"));
  EXPECT_NE(HashString("gender"), HashString("Gender"));
  EXPECT_NE(HashString(""), HashString(std::string_view("\0", 1)));
}

TEST(DeriveSeedTest, OrderAndPartsMatter) {
  EXPECT_EQ(DeriveSeed(7, {1, 2}), DeriveSeed(7, {1, 2}));
  EXPECT_NE(DeriveSeed(7, {1, 2}), DeriveSeed(7, {2, 1}));
  EXPECT_NE(DeriveSeed(7, {1}), DeriveSeed(7, {1, 0}));
  EXPECT_NE(DeriveSeed(7, {1}), DeriveSeed(8, {1}));
}

TEST(StreamTest, BelowStaysInRangeAndCoversIt) {
  Stream s(42);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = s.Below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  // Each bucket expects 10000 with sd about 93.
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(StreamTest, UniformInUnitInterval) {
  Stream s(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(SampleIndicesTest, DistinctSortedAndBounded) {
  Stream s(11);
  for (std::size_t n : {1u, 5u, 100u}) {
    for (std::size_t k : {0u, 1u, 3u, 100u, 200u}) {
      const auto idx = SampleIndices(n, k, s);
      EXPECT_EQ(idx.size(), std::min(k, n));
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
      EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), idx.size());
      for (auto i : idx) EXPECT_LT(i, n);
    }
  }
}

TEST(SampleIndicesTest, InclusionIsUniform) {
  // Each index is included with probability k / n.
  std::vector<int> hits(20, 0);
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    Stream s(seed);
    for (auto i : SampleIndices(20, 5, s)) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(h, 5000, 300);
}

TEST(PermutationTest, IsAPermutation) {
  Stream s(5);
  auto p = Permutation(50, s);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
  EXPECT_TRUE(Permutation(0, s).empty());
}

TEST(GaussianFromKeyTest, MomentsAndDeterminism) {
  EXPECT_EQ(GaussianFromKey(99), GaussianFromKey(99));
  const int n = 200000;
  double sum = 0, sum2 = 0;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double z = GaussianFromKey(DeriveSeed(1, {static_cast<std::uint64_t>(i)}));
    ASSERT_TRUE(std::isfinite(z));
    sum += z;
    sum2 += z * z;
    below += z < -1.959963984540054;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.015);
  EXPECT_NEAR(static_cast<double>(below) / n, 0.025, 0.002);
}

}  // namespace
}  // namespace bab::rng
