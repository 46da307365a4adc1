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

#ifndef BAB_SCORING_H_
#define BAB_SCORING_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bab/corpus.h"

namespace bab {

enum class Label { kNegative, kPositive };

std::string_view LabelName(Label label);
Label ParseLabel(std::string_view name);

// A scorer's nominal class plus the probability of the positive class.
struct SentimentOutput {
  Label label = Label::kNegative;
  double score = 0.0;

  // Label derived at the 0.5 threshold; a score of exactly 0.5 is positive.
  static SentimentOutput FromScore(double score);
  bool positive() const { return label == Label::kPositive; }
  bool operator==(const SentimentOutput&) const = default;
};

// Throws ValidationError unless 0 <= score <= 1.
void ValidateOutput(const SentimentOutput& output);

struct ScoreRecord {
  std::string sentence_id;
  std::string model_id;
  SentimentOutput output;

  bool operator==(const ScoreRecord&) const = default;
};

// Scores of a single model, keyed by sentence id.
struct ModelScores {
  std::string model_id;
  std::unordered_map<std::string, SentimentOutput> by_sentence;

  const SentimentOutput* Find(std::string_view sentence_id) const;
};

// (sentence_id, model_id) -> output. Re-inserting an identical record is a
// no-op; inserting a different output under an existing key throws. Writes
// are serialized; concurrent reads are safe once no writer is active.
class ScoreStore {
 public:
  ScoreStore() = default;
  ScoreStore(const ScoreStore& other);
  ScoreStore& operator=(const ScoreStore& other);

  // Returns true if the key was new.
  bool Insert(const ScoreRecord& record);
  std::optional<SentimentOutput> Find(std::string_view sentence_id,
                                      std::string_view model_id) const;
  bool Contains(std::string_view sentence_id, std::string_view model_id) const;
  std::size_t size() const { return records_.size(); }

  // Records ordered by (model_id, sentence_id).
  std::vector<ScoreRecord> Records() const;
  std::vector<std::string> ModelIds() const;
  ModelScores ForModel(std::string_view model_id) const;

  bool operator==(const ScoreStore& other) const { return records_ == other.records_; }

 private:
  using Key = std::pair<std::string, std::string>;  // (model_id, sentence_id)
  std::map<Key, SentimentOutput, std::less<>> records_;
  mutable std::mutex mu_;
};

// Newline-delimited {sentence_id, model_id, label, score} records.
ScoreStore ParseScores(std::string_view content);
std::string SerializeScores(const ScoreStore& store);
// A missing file loads as an empty store.
ScoreStore LoadScores(const std::filesystem::path& path);
void SaveScores(const ScoreStore& store, const std::filesystem::path& path);
// Adds records from `path` into `store` (same conflict rules as Insert).
void MergeScores(const std::filesystem::path& path, ScoreStore* store);

// Deterministic scorer with planted, per-category additive offsets.
struct MockScorerSpec {
  double base_mean = 0.5;
  double noise_sd = 0.0;
  std::map<std::string, double> planted_bias;  // category -> offset
  std::uint64_t seed = 0;

  bool operator==(const MockScorerSpec&) const = default;
};

void ValidateMockSpec(const MockScorerSpec& spec);
MockScorerSpec ParseMockSpec(std::string_view json_text);
std::string SerializeMockSpec(const MockScorerSpec& spec);

// clamp(base + offset(category) + noise_sd * z, 0, 1) where z is a standard
// normal computed from (seed, sentence id) alone.
SentimentOutput MockScore(const MockScorerSpec& spec,
                          const EvaluationSentence& sentence);

struct ClientOptions {
  std::size_t max_batch = 64;
  std::size_t max_in_flight = 4;
  // Retries after the first failed request, one per backoff entry.
  std::vector<std::chrono::milliseconds> backoff = {
      std::chrono::milliseconds(500), std::chrono::milliseconds(1000),
      std::chrono::milliseconds(2000)};
  std::chrono::seconds timeout{30};
};

// Client for the `POST /score` wire protocol:
//   request  {"model_id": str, "texts": [str, ...]}
//   response {"results": [{"label": "positive"|"negative", "score": num}, ...]}
// Transport failures and 5xx responses are retried; 4xx and malformed
// responses surface as TransportError immediately. A response that omits a
// label gets one derived from its score.
class ScoringClient {
 public:
  // endpoint: http://host[:port][/prefix]
  explicit ScoringClient(std::string endpoint, ClientOptions options = {});

  // One request; texts.size() must not exceed max_batch.
  std::vector<SentimentOutput> ScoreBatch(std::string_view model_id,
                                          std::span<const std::string> texts) const;

  // Splits into batches and keeps up to max_in_flight requests running.
  // Output order matches input order.
  std::vector<SentimentOutput> ScoreAll(std::string_view model_id,
                                        std::span<const std::string> texts) const;

  const ClientOptions& options() const { return options_; }

 private:
  std::string scheme_host_port_;
  std::string path_;
  ClientOptions options_;
};

// Parses a response body; exposed for protocol tests.
std::vector<SentimentOutput> ParseScoreResponse(std::string_view body,
                                                std::size_t expected_count);
std::string BuildScoreRequest(std::string_view model_id,
                              std::span<const std::string> texts);

}  // namespace bab

#endif  // BAB_SCORING_H_
