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

#ifndef BAB_TOOLS_SYNTH_H_
#define BAB_TOOLS_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bab/audit.h"
#include "bab/corpus.h"
#include "bab/scoring.h"

namespace bab::synth {

struct FixtureOptions {
  std::uint64_t seed = 0;
  int pairs_per_dimension = 1000;
  // Unpaired sentences per category, for the last dimension only.
  int unpaired_per_category = 100;
  std::vector<std::string> bases = {"bertA", "bertB"};
  int datasets = 3;
  double noise_sd = 0.12;
  double bias = 0.1;
};

struct Fixture {
  Corpus corpus;
  std::vector<std::pair<std::string, MockScorerSpec>> models;  // id -> spec
  ScoreStore scores;
  std::vector<DeveloperProfile> profiles;
};

// A deterministic corpus over the default dimensions, plus mock models
// named "D<k>-<base>" with their scores and developer profiles. Dataset k
// plants a bias toward the first category when k % 3 == 1 and toward the
// second when k % 3 == 2; k % 3 == 0 is unbiased.
Fixture MakeFixture(const FixtureOptions& options);

// Writes corpus.jsonl, scores.jsonl, profiles.jsonl and mock/<id>.json.
void WriteFixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace bab::synth

#endif  // BAB_TOOLS_SYNTH_H_
