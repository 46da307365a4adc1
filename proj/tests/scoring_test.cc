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

#include "bab/scoring.h"

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "bab/errors.h"
#include "test_util.h"

namespace bab {
namespace {

EvaluationSentence Sentence(const std::string& id, const std::string& category) {
  EvaluationSentence s;
  s.id = id;
  s.text = "text " + id;
  s.dimension = "gender";
  s.category = category;
  return s;
}

ScoreStore MakeStore(int n) {
  ScoreStore store;
  for (int i = 0; i < n; ++i) {
    const double score = (i % 997) / 996.0;
    store.Insert({"s" + std::to_string(i), i % 3 == 0 ? "D1-mBERT" : "D2-BanglaBERT",
                  SentimentOutput::FromScore(score)});
  }
  return store;
}

TEST(SentimentOutputTest, ThresholdTiesArePositive) {
  EXPECT_EQ(SentimentOutput::FromScore(0.5).label, Label::kPositive);
  EXPECT_EQ(SentimentOutput::FromScore(0.4999999).label, Label::kNegative);
  EXPECT_THROW(ValidateOutput({Label::kPositive, 1.0000001}), ValidationError);
  EXPECT_THROW(ValidateOutput({Label::kPositive, std::nan("")}), ValidationError);
  EXPECT_EQ(ParseLabel(LabelName(Label::kNegative)), Label::kNegative);
  EXPECT_THROW(ParseLabel("neutral"), ValidationError);
}

TEST(ScoreStoreTest, RoundTripThousandRecords) {
  const ScoreStore store = MakeStore(1000);
  ASSERT_EQ(store.size(), 1000u);
  testing::TempDir dir("scores");
  SaveScores(store, dir / "scores.jsonl");
  const ScoreStore back = LoadScores(dir / "scores.jsonl");
  EXPECT_EQ(back, store);
  EXPECT_EQ(SerializeScores(back), SerializeScores(store));
  EXPECT_FALSE(std::filesystem::exists(dir / "scores.jsonl.tmp"));
}

TEST(ScoreStoreTest, IdempotentAndConflictingDuplicates) {
  ScoreStore store;
  const ScoreRecord r{"s1", "m", {Label::kPositive, 0.75}};
  EXPECT_TRUE(store.Insert(r));
  EXPECT_FALSE(store.Insert(r));
  EXPECT_EQ(store.size(), 1u);
  EXPECT_THROW(store.Insert({"s1", "m", {Label::kPositive, 0.76}}), ValidationError);
  EXPECT_THROW(store.Insert({"s1", "m", {Label::kNegative, 0.75}}), ValidationError);
  EXPECT_TRUE(store.Insert({"s1", "other", {Label::kPositive, 0.76}}));
  EXPECT_THROW(store.Insert({"", "m", {Label::kPositive, 0.5}}), ValidationError);
  EXPECT_THROW(store.Insert({"s2", "m", {Label::kPositive, 1.5}}), ValidationError);
}

TEST(ScoreStoreTest, FileFormat) {
  const ScoreStore store = ParseScores(
      "{\"sentence_id\":\"a\",\"model_id\":\"m\",\"label\":\"negative\",\"score\":0.9}\n"
      "\n"
      "{\"sentence_id\":\"b\",\"model_id\":\"m\",\"score\":0.5}\r\n");
  EXPECT_EQ(store.Find("a", "m")->label, Label::kNegative);  // verbatim label
  EXPECT_EQ(store.Find("b", "m")->label, Label::kPositive);  // derived
  EXPECT_FALSE(store.Contains("a", "x"));
  EXPECT_EQ(SerializeScores(store),
            "{\"sentence_id\":\"a\",\"model_id\":\"m\",\"label\":\"negative\",\"score\":0.9}\n"
            "{\"sentence_id\":\"b\",\"model_id\":\"m\",\"label\":\"positive\",\"score\":0.5}\n");
  try {
    ParseScores("{\"sentence_id\":\"a\",\"model_id\":\"m\",\"score\":0.9}\n"
                "{\"sentence_id\":\"a\",\"model_id\":\"m\",\"score\":0.8}\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2: conflicting"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ParseScores("{\"sentence_id\":\"a\"}\n"), ValidationError);
  EXPECT_THROW(ParseScores("nope\n"), ValidationError);
}

TEST(ScoreStoreTest, ModelViewsAndMerge) {
  const ScoreStore store = MakeStore(30);
  EXPECT_EQ(store.ModelIds(), (std::vector<std::string>{"D1-mBERT", "D2-BanglaBERT"}));
  const ModelScores m = store.ForModel("D1-mBERT");
  EXPECT_EQ(m.by_sentence.size(), 10u);
  ASSERT_NE(m.Find("s3"), nullptr);
  EXPECT_EQ(m.Find("s4"), nullptr);

  testing::TempDir dir("scores");
  SaveScores(store, dir / "a.jsonl");
  ScoreStore merged = MakeStore(40);
  MergeScores(dir / "a.jsonl", &merged);
  EXPECT_EQ(merged.size(), 40u);
  MergeScores(dir / "missing.jsonl", &merged);
  EXPECT_EQ(LoadScores(dir / "missing.jsonl").size(), 0u);
}

TEST(ScoreStoreTest, ConcurrentInserts) {
  ScoreStore store;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&store, t] {
      for (int i = 0; i < 500; ++i) {
        store.Insert({"s" + std::to_string(i), "m" + std::to_string(t % 4),
                      SentimentOutput::FromScore(i / 500.0)});
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store.size(), 2000u);
}

TEST(MockScoreTest, ZeroNoise) {
  const MockScorerSpec spec{.base_mean = 0.5};
  for (const char* id : {"a", "b", "c"}) {
    const SentimentOutput out = MockScore(spec, Sentence(id, "male"));
    EXPECT_EQ(out.score, 0.5);
    EXPECT_EQ(out.label, Label::kPositive);
  }
}

TEST(MockScoreTest, AdditiveOffset) {
  const MockScorerSpec spec{.base_mean = 0.5, .planted_bias = {{"female", 0.2}}};
  EXPECT_DOUBLE_EQ(MockScore(spec, Sentence("a", "female")).score, 0.7);
  EXPECT_DOUBLE_EQ(MockScore(spec, Sentence("a", "male")).score, 0.5);
  const MockScorerSpec big{.base_mean = 0.9, .planted_bias = {{"female", 0.5}}};
  EXPECT_EQ(MockScore(big, Sentence("a", "female")).score, 1.0);
}

TEST(MockScoreTest, PlantedDifferenceOverPairs) {
  const MockScorerSpec spec{
      .base_mean = 0.5, .noise_sd = 0.1, .planted_bias = {{"female", 0.05}}, .seed = 17};
  double sum = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::string p = "p" + std::to_string(i);
    sum += MockScore(spec, Sentence(p + "f", "female")).score -
           MockScore(spec, Sentence(p + "m", "male")).score;
  }
  EXPECT_NEAR(sum / 2000, 0.05, 0.01);
}

TEST(MockScoreTest, PureFunctionOfIdAndCategory) {
  const MockScorerSpec spec{.base_mean = 0.4, .noise_sd = 0.2, .seed = 5};
  EvaluationSentence a = Sentence("x", "male");
  EvaluationSentence b = a;
  b.text = "different text";
  b.dimension = "religion";
  EXPECT_EQ(MockScore(spec, a), MockScore(spec, b));
  MockScorerSpec other = spec;
  other.seed = 6;
  EXPECT_NE(MockScore(spec, a).score, MockScore(other, a).score);
}

TEST(MockSpecTest, JsonRoundTripAndValidation) {
  const MockScorerSpec spec{
      .base_mean = 0.45, .noise_sd = 0.12, .planted_bias = {{"Hindu", -0.05}}, .seed = 99};
  EXPECT_EQ(ParseMockSpec(SerializeMockSpec(spec)), spec);
  EXPECT_THROW(ParseMockSpec("{\"base_mean\": 1.0}"), ValidationError);
  EXPECT_THROW(ParseMockSpec("{\"noise_sd\": -1}"), ValidationError);
  EXPECT_THROW(ParseMockSpec("{\"planted_bias\": {\"a\": \"x\"}}"), ValidationError);
  EXPECT_THROW(ParseMockSpec("[]"), ValidationError);
}

}  // namespace
}  // namespace bab
