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

#include <benchmark/benchmark.h>

#include "bab/audit.h"
#include "bab/corpus.h"
#include "bab/scoring.h"

namespace bab {
namespace {

struct Setup {
  Corpus corpus;
  ModelScores scores;
};

Setup MakeSetup(int n_pairs) {
  Setup s;
  std::string text;
  for (int i = 0; i < n_pairs; ++i) {
    const std::string id = "p" + std::to_string(i);
    text += "{\"id\":\"" + id + "a\",\"pair_id\":\"" + id +
            "\",\"dimension\":\"gender\",\"category\":\"female\",\"expression\":\"explicit\","
            "\"text\":\"a " + id + "\"}\n";
    text += "{\"id\":\"" + id + "b\",\"pair_id\":\"" + id +
            "\",\"dimension\":\"gender\",\"category\":\"male\",\"expression\":\"explicit\","
            "\"text\":\"b " + id + "\"}\n";
  }
  s.corpus = ParseCorpus(text, CorpusFormat::kJsonl);
  MockScorerSpec spec;
  spec.noise_sd = 0.1;
  spec.planted_bias["male"] = 0.05;
  s.scores.model_id = "D1-bench";
  for (const auto* sentence : s.corpus.SentencesFor("gender")) {
    s.scores.by_sentence[sentence->id] = MockScore(spec, *sentence);
  }
  return s;
}

void BM_RunRq1(benchmark::State& state) {
  const Setup s = MakeSetup(static_cast<int>(state.range(0)));
  const AuditConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(RunRq1(s.scores, s.corpus, "gender", config));
}
BENCHMARK(BM_RunRq1)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace bab
