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

#include "bab/metrics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "bab/errors.h"
#include "bab/rng.h"

namespace bab {
namespace {

ScoredGroup Group(const std::string& category, int positives, int total) {
  ScoredGroup g{category, {}};
  for (int i = 0; i < total; ++i) {
    g.outputs.push_back(SentimentOutput::FromScore(i < positives ? 0.8 : 0.2));
  }
  return g;
}

std::vector<std::string> Repeat(std::initializer_list<std::pair<const char*, int>> parts) {
  std::vector<std::string> out;
  for (auto [label, n] : parts) out.insert(out.end(), n, label);
  return out;
}

TEST(PcrTest, RatesAndDirection) {
  const PcrResult r = Pcr(Group("female", 15, 20), Group("male", 10, 20));
  EXPECT_DOUBLE_EQ(r.first_rate, 0.75);
  EXPECT_DOUBLE_EQ(r.second_rate, 0.50);
  EXPECT_EQ(r.direction, "female");
  EXPECT_EQ(Pcr(Group("female", 3, 20), Group("male", 10, 20)).direction, "male");
}

TEST(PcrTest, EqualRatesTie) {
  EXPECT_EQ(Pcr(Group("a", 5, 10), Group("b", 10, 20)).direction, kTie);
  EXPECT_EQ(Pcr(Group("a", 0, 3), Group("b", 0, 7)).direction, kTie);
}

TEST(PcrTest, DuplicationInvarianceExhaustive) {
  // Every (positives, size) combination up to 8 per side, duplicated k times.
  for (int na = 1; na <= 8; ++na) {
    for (int pa = 0; pa <= na; ++pa) {
      for (int nb = 1; nb <= 8; ++nb) {
        for (int pb = 0; pb <= nb; ++pb) {
          const std::string base = Pcr(Group("a", pa, na), Group("b", pb, nb)).direction;
          // Oracle: compare pa / na with pb / nb in integers.
          const std::string expected = pa * nb > pb * na ? "a" : pa * nb < pb * na ? "b" : "tie";
          ASSERT_EQ(base, expected);
          for (int k : {2, 3, 7}) {
            ASSERT_EQ(Pcr(Group("a", pa * k, na * k), Group("b", pb * k, nb * k)).direction,
                      base);
          }
        }
      }
    }
  }
}

TEST(PcrTest, EmptyGroupRejected) {
  EXPECT_THROW(Pcr(Group("a", 0, 0), Group("b", 1, 2)), ValidationError);
}

TEST(PcmTest, Arithmetic) {
  const std::vector<std::pair<double, double>> pairs = {{0.9, 0.4}, {0.8, 0.5}};
  const PcmSet s = PcmAll(pairs);
  EXPECT_NEAR(s.signed_mean, 0.4, 1e-15);
  EXPECT_NEAR(s.abs_mean, 0.4, 1e-15);
  EXPECT_NEAR(s.signed_sum, 0.8, 1e-15);
  EXPECT_EQ(s.n_pairs, 2);
}

TEST(PcmTest, SwapAntisymmetry) {
  const std::vector<std::pair<double, double>> pairs = {{0.9, 0.4}, {0.1, 0.5}, {0.3, 0.3}};
  std::vector<std::pair<double, double>> swapped;
  for (auto [a, b] : pairs) swapped.emplace_back(b, a);
  const PcmSet s = PcmAll(pairs), w = PcmAll(swapped);
  EXPECT_DOUBLE_EQ(s.signed_mean, -w.signed_mean);
  EXPECT_DOUBLE_EQ(s.signed_sum, -w.signed_sum);
  EXPECT_DOUBLE_EQ(s.abs_mean, w.abs_mean);
  EXPECT_NEAR(s.abs_mean, (0.5 + 0.4) / 3, 1e-15);
}

TEST(PcmTest, SumScaleForLargeCorpus) {
  // 2,540 pairs whose differences total 146.98 have a mean near 0.0579.
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 2540; ++i) pairs.emplace_back(0.5 + 146.98 / 2540, 0.5);
  const PcmSet s = PcmAll(pairs);
  EXPECT_NEAR(s.signed_sum, 146.98, 1e-9);
  EXPECT_NEAR(s.signed_mean, 0.0579, 5e-5);
}

TEST(PcmTest, MissingScoresExcluded) {
  using Opt = std::pair<std::optional<double>, std::optional<double>>;
  const std::vector<Opt> pairs = {{0.9, 0.1}, {std::nullopt, 0.2}, {0.5, std::nullopt},
                                  {0.3, 0.5}};
  const PcmResult r = Pcm(std::span<const Opt>(pairs), PcmMode::kSignedMean);
  EXPECT_EQ(r.n_pairs, 2);
  EXPECT_EQ(r.n_excluded, 2);
  EXPECT_NEAR(r.value, 0.3, 1e-15);
}

TEST(PcmTest, Errors) {
  const std::vector<std::pair<double, double>> none;
  EXPECT_THROW(Pcm(none, PcmMode::kSignedMean), ValidationError);
  const std::vector<std::pair<double, double>> bad = {{0.5, 1.2}};
  EXPECT_THROW(Pcm(bad, PcmMode::kAbsMean), ValidationError);
  EXPECT_EQ(PcmModeName(PcmMode::kSignedSum), "signed_sum");
}

TEST(PcmTest, PlantedOffsetIsMonotone) {
  // Mock scores with a growing offset on the first category: the signed mean
  // never decreases (common random numbers across offsets).
  double previous = -1;
  for (double delta = 0.0; delta <= 0.3; delta += 0.02) {
    const MockScorerSpec spec{
        .base_mean = 0.5, .noise_sd = 0.1, .planted_bias = {{"a", delta}}, .seed = 4};
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 2000; ++i) {
      EvaluationSentence x{.id = "x" + std::to_string(i), .category = "a"};
      EvaluationSentence y{.id = "y" + std::to_string(i), .category = "b"};
      pairs.emplace_back(MockScore(spec, x).score, MockScore(spec, y).score);
    }
    const double m = PcmAll(pairs).signed_mean;
    EXPECT_GE(m, previous - 1e-3) << delta;
    previous = m;
  }
}

TEST(ConstantBiasTest, ExamplePatterns) {
  EXPECT_EQ(ConstantBias(Repeat({{"male", 10}})).ToString(), "constant(male)");
  const Consistency lean = ConstantBias(Repeat({{"male", 7}, {"female", 3}}));
  EXPECT_EQ(lean.kind, ConsistencyKind::kLeaning);
  EXPECT_EQ(lean.category, "male");
  EXPECT_EQ(lean.count, 7);
  EXPECT_EQ(lean.total, 10);
  EXPECT_EQ(lean.ToString(), "leaning(male, 7/10)");
  EXPECT_EQ(ConstantBias(Repeat({{"male", 5}, {"female", 5}})).kind, ConsistencyKind::kMixed);
}

TEST(ConstantBiasTest, TiesNeverCountAsACategory) {
  EXPECT_EQ(ConstantBias(Repeat({{"tie", 10}})).kind, ConsistencyKind::kMixed);
  const Consistency c = ConstantBias(Repeat({{"Hindu", 9}, {"tie", 1}}));
  EXPECT_EQ(c.ToString(), "leaning(Hindu, 9/10)");
  EXPECT_EQ(ConstantBias(Repeat({{"a", 4}, {"tie", 2}, {"b", 4}})).kind, ConsistencyKind::kMixed);
  EXPECT_THROW(ConstantBias(std::vector<std::string>{}), ValidationError);
}

TEST(ConstantBiasTest, ConstantIffSingleCategory) {
  // Brute force over all label strings of length <= 6 from {a, b, tie}.
  const std::string labels[] = {"a", "b", "tie"};
  for (int len = 1; len <= 6; ++len) {
    int combos = 1;
    for (int i = 0; i < len; ++i) combos *= 3;
    for (int code = 0; code < combos; ++code) {
      std::vector<std::string> d;
      int a = 0, b = 0;
      for (int i = 0, c = code; i < len; ++i, c /= 3) {
        d.push_back(labels[c % 3]);
        a += c % 3 == 0;
        b += c % 3 == 1;
      }
      const Consistency r = ConstantBias(d);
      ASSERT_EQ(r.kind == ConsistencyKind::kConstant, a == len || b == len);
      ASSERT_EQ(r.kind == ConsistencyKind::kMixed, a == b);
      if (r.kind != ConsistencyKind::kMixed) {
        ASSERT_EQ(r.category, a > b ? "a" : "b");
        ASSERT_EQ(r.count, std::max(a, b));
      }
    }
  }
}

}  // namespace
}  // namespace bab
