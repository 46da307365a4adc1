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

#include <cmath>
#include <map>

#include "bab/errors.h"

namespace bab {
namespace {

double PositiveRate(const ScoredGroup& group) {
  if (group.outputs.empty()) {
    throw ValidationError("PCR: group '" + group.category + "' is empty");
  }
  std::int64_t positives = 0;
  for (const auto& o : group.outputs) positives += o.positive() ? 1 : 0;
  return static_cast<double>(positives) / static_cast<double>(group.outputs.size());
}

void CheckScore(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ValidationError("PCM: score " + std::to_string(s) + " outside [0, 1]");
  }
}

}  // namespace

PcrResult Pcr(const ScoredGroup& first, const ScoredGroup& second) {
  PcrResult r;
  r.first_category = first.category;
  r.second_category = second.category;
  // Compare cross-multiplied counts so duplicated groups give exactly the
  // same answer as the originals.
  const auto pos = [](const ScoredGroup& g) {
    std::int64_t p = 0;
    for (const auto& o : g.outputs) p += o.positive() ? 1 : 0;
    return p;
  };
  r.first_rate = PositiveRate(first);
  r.second_rate = PositiveRate(second);
  const auto lhs = static_cast<std::int64_t>(pos(first)) * static_cast<std::int64_t>(second.outputs.size());
  const auto rhs = static_cast<std::int64_t>(pos(second)) * static_cast<std::int64_t>(first.outputs.size());
  if (lhs > rhs) {
    r.direction = first.category;
  } else if (rhs > lhs) {
    r.direction = second.category;
  } else {
    r.direction = std::string(kTie);
  }
  return r;
}

std::string_view PcmModeName(PcmMode mode) {
  switch (mode) {
    case PcmMode::kSignedMean:
      return "signed_mean";
    case PcmMode::kAbsMean:
      return "abs_mean";
    case PcmMode::kSignedSum:
      return "signed_sum";
  }
  return "signed_mean";
}

PcmResult Pcm(std::span<const std::pair<double, double>> pairs, PcmMode mode) {
  if (pairs.empty()) throw ValidationError("PCM: no pairs");
  double sum = 0.0;
  for (const auto& [a, b] : pairs) {
    CheckScore(a);
    CheckScore(b);
    sum += mode == PcmMode::kAbsMean ? std::fabs(a - b) : a - b;
  }
  const auto n = static_cast<std::int64_t>(pairs.size());
  PcmResult r;
  r.mode = mode;
  r.n_pairs = n;
  r.value = mode == PcmMode::kSignedSum ? sum : sum / static_cast<double>(n);
  return r;
}

PcmResult Pcm(std::span<const std::pair<std::optional<double>, std::optional<double>>> pairs,
              PcmMode mode) {
  std::vector<std::pair<double, double>> complete;
  std::int64_t excluded = 0;
  for (const auto& [a, b] : pairs) {
    if (a.has_value() && b.has_value()) {
      complete.emplace_back(*a, *b);
    } else {
      ++excluded;
    }
  }
  PcmResult r = Pcm(std::span<const std::pair<double, double>>(complete), mode);
  r.n_excluded = excluded;
  return r;
}

PcmSet PcmAll(std::span<const std::pair<double, double>> pairs) {
  PcmSet s;
  s.signed_mean = Pcm(pairs, PcmMode::kSignedMean).value;
  s.abs_mean = Pcm(pairs, PcmMode::kAbsMean).value;
  s.signed_sum = Pcm(pairs, PcmMode::kSignedSum).value;
  s.n_pairs = static_cast<std::int64_t>(pairs.size());
  return s;
}

std::string_view ConsistencyKindName(ConsistencyKind kind) {
  switch (kind) {
    case ConsistencyKind::kConstant:
      return "constant";
    case ConsistencyKind::kLeaning:
      return "leaning";
    case ConsistencyKind::kMixed:
      return "mixed";
  }
  return "mixed";
}

std::string Consistency::ToString() const {
  switch (kind) {
    case ConsistencyKind::kConstant:
      return "constant(" + category + ")";
    case ConsistencyKind::kLeaning:
      return "leaning(" + category + ", " + std::to_string(count) + "/" +
             std::to_string(total) + ")";
    case ConsistencyKind::kMixed:
      return "mixed";
  }
  return "mixed";
}

Consistency ConstantBias(std::span<const std::string> directions) {
  if (directions.empty()) throw ValidationError("constant-bias check needs at least one split");
  std::map<std::string, int> counts;
  for (const auto& d : directions) {
    if (d != kTie) ++counts[d];
  }
  Consistency c;
  c.total = static_cast<int>(directions.size());
  int best = 0, runner_up = 0;
  for (const auto& [category, count] : counts) {
    if (count > best) {
      runner_up = best;
      best = count;
      c.category = category;
    } else if (count > runner_up) {
      runner_up = count;
    }
  }
  if (best == 0 || best == runner_up) {
    c.kind = ConsistencyKind::kMixed;
    c.category.clear();
    c.count = best;
    return c;
  }
  c.count = best;
  c.kind = best == c.total ? ConsistencyKind::kConstant : ConsistencyKind::kLeaning;
  return c;
}

}  // namespace bab
