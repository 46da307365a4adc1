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

#ifndef BAB_METRICS_H_
#define BAB_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bab/scoring.h"

namespace bab {

// Direction label used when neither category wins.
inline constexpr std::string_view kTie = "tie";

struct ScoredGroup {
  std::string category;
  std::vector<SentimentOutput> outputs;
};

struct PcrResult {
  std::string first_category;
  double first_rate = 0.0;
  std::string second_category;
  double second_rate = 0.0;
  // Category with the strictly higher positive rate, or kTie.
  std::string direction;

  bool operator==(const PcrResult&) const = default;
};

// Positive classification rate per group and the argmax direction.
PcrResult Pcr(const ScoredGroup& first, const ScoredGroup& second);

enum class PcmMode { kSignedMean, kAbsMean, kSignedSum };

std::string_view PcmModeName(PcmMode mode);

struct PcmResult {
  PcmMode mode = PcmMode::kSignedMean;
  double value = 0.0;
  std::int64_t n_pairs = 0;
  // Pairs dropped because one side had no score.
  std::int64_t n_excluded = 0;

  bool operator==(const PcmResult&) const = default;
};

// Pairwise comparison metric over (first score, second score) pairs:
//   kSignedMean  mean(first - second)
//   kAbsMean     mean(|first - second|)
//   kSignedSum   sum(first - second)
PcmResult Pcm(std::span<const std::pair<double, double>> pairs, PcmMode mode);
PcmResult Pcm(std::span<const std::pair<std::optional<double>, std::optional<double>>> pairs,
              PcmMode mode);

struct PcmSet {
  double signed_mean = 0.0;
  double abs_mean = 0.0;
  double signed_sum = 0.0;
  std::int64_t n_pairs = 0;

  bool operator==(const PcmSet&) const = default;
};

// All three modes at once.
PcmSet PcmAll(std::span<const std::pair<double, double>> pairs);

enum class ConsistencyKind { kConstant, kLeaning, kMixed };

std::string_view ConsistencyKindName(ConsistencyKind kind);

struct Consistency {
  ConsistencyKind kind = ConsistencyKind::kMixed;
  std::string category;  // empty for kMixed
  int count = 0;         // splits won by `category`
  int total = 0;

  bool operator==(const Consistency&) const = default;
  std::string ToString() const;
};

// Classifies per-split direction labels. Ties ("tie") never count as a
// category: constant means one category won every split, mixed means the
// top categories are tied (or nothing won).
Consistency ConstantBias(std::span<const std::string> directions);

}  // namespace bab

#endif  // BAB_METRICS_H_
