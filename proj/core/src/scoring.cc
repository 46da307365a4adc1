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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "bab/errors.h"
#include "bab/rng.h"
#include "bab/scoring.h"

namespace bab {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

}  // namespace

std::string_view LabelName(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

Label ParseLabel(std::string_view name) {
  if (name == "positive") return Label::kPositive;
  if (name == "negative") return Label::kNegative;
  throw ValidationError("unknown label '" + std::string(name) + "'");
}

SentimentOutput SentimentOutput::FromScore(double score) {
  return {score >= 0.5 ? Label::kPositive : Label::kNegative, score};
}

void ValidateOutput(const SentimentOutput& output) {
  if (!(output.score >= 0.0 && output.score <= 1.0)) {
    throw ValidationError("score " + std::to_string(output.score) +
                          " outside [0, 1]");
  }
}

const SentimentOutput* ModelScores::Find(std::string_view sentence_id) const {
  auto it = by_sentence.find(std::string(sentence_id));
  return it == by_sentence.end() ? nullptr : &it->second;
}

ScoreStore::ScoreStore(const ScoreStore& other) {
  std::lock_guard lock(other.mu_);
  records_ = other.records_;
}

ScoreStore& ScoreStore::operator=(const ScoreStore& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  records_ = other.records_;
  return *this;
}

bool ScoreStore::Insert(const ScoreRecord& record) {
  if (record.sentence_id.empty() || record.model_id.empty()) {
    throw ValidationError("score record needs sentence_id and model_id");
  }
  ValidateOutput(record.output);
  std::lock_guard lock(mu_);
  auto [it, inserted] =
      records_.try_emplace(Key(record.model_id, record.sentence_id), record.output);
  if (!inserted && !(it->second == record.output)) {
    throw ValidationError("conflicting score for sentence '" + record.sentence_id +
                          "' under model '" + record.model_id + "'");
  }
  return inserted;
}

std::optional<SentimentOutput> ScoreStore::Find(std::string_view sentence_id,
                                                std::string_view model_id) const {
  auto it = records_.find(Key(model_id, sentence_id));
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

bool ScoreStore::Contains(std::string_view sentence_id,
                          std::string_view model_id) const {
  return Find(sentence_id, model_id).has_value();
}

std::vector<ScoreRecord> ScoreStore::Records() const {
  std::vector<ScoreRecord> out;
  out.reserve(records_.size());
  for (const auto& [key, output] : records_) {
    out.push_back({key.second, key.first, output});
  }
  return out;
}

std::vector<std::string> ScoreStore::ModelIds() const {
  std::vector<std::string> ids;
  for (const auto& [key, output] : records_) {
    if (ids.empty() || ids.back() != key.first) ids.push_back(key.first);
  }
  return ids;
}

ModelScores ScoreStore::ForModel(std::string_view model_id) const {
  ModelScores scores;
  scores.model_id = std::string(model_id);
  for (auto it = records_.lower_bound(Key(model_id, ""));
       it != records_.end() && it->first.first == model_id; ++it) {
    scores.by_sentence.emplace(it->first.second, it->second);
  }
  return scores;
}

ScoreStore ParseScores(std::string_view content) {
  ScoreStore store;
  int line_no = 0;
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = "score file line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(where + "malformed record: " + e.what());
    }
    try {
      ScoreRecord r;
      r.sentence_id = j.at("sentence_id").get<std::string>();
      r.model_id = j.at("model_id").get<std::string>();
      r.output.score = j.at("score").get<double>();
      if (j.contains("label") && !j["label"].is_null()) {
        r.output.label = ParseLabel(j["label"].get<std::string>());
      } else {
        r.output = SentimentOutput::FromScore(r.output.score);
      }
      store.Insert(r);
    } catch (const json::exception& e) {
      throw ValidationError(where + "malformed record: " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return store;
}

std::string SerializeScores(const ScoreStore& store) {
  std::string out;
  for (const ScoreRecord& r : store.Records()) {
    ordered_json j;
    j["sentence_id"] = r.sentence_id;
    j["model_id"] = r.model_id;
    j["label"] = LabelName(r.output.label);
    j["score"] = r.output.score;
    out.append(j.dump()).push_back('\n');
  }
  return out;
}

ScoreStore LoadScores(const std::filesystem::path& path) {
  ScoreStore store;
  MergeScores(path, &store);
  return store;
}

void MergeScores(const std::filesystem::path& path, ScoreStore* store) {
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  for (const ScoreRecord& r : ParseScores(buffer.str()).Records()) {
    store->Insert(r);
  }
}

void SaveScores(const ScoreStore& store, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << SerializeScores(store);
  }
  std::filesystem::rename(tmp, path);
}

void ValidateMockSpec(const MockScorerSpec& spec) {
  if (!(spec.base_mean > 0.0 && spec.base_mean < 1.0)) {
    throw ValidationError("mock spec: base_mean must lie in (0, 1)");
  }
  if (!(spec.noise_sd >= 0.0) || std::isinf(spec.noise_sd)) {
    throw ValidationError("mock spec: noise_sd must be finite and >= 0");
  }
  for (const auto& [category, offset] : spec.planted_bias) {
    if (!std::isfinite(offset)) {
      throw ValidationError("mock spec: offset for '" + category + "' is not finite");
    }
  }
}

MockScorerSpec ParseMockSpec(std::string_view json_text) {
  MockScorerSpec spec;
  try {
    const json j = json::parse(json_text);
    spec.base_mean = j.value("base_mean", spec.base_mean);
    spec.noise_sd = j.value("noise_sd", spec.noise_sd);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("planted_bias")) {
      for (const auto& [category, offset] : j["planted_bias"].items()) {
        spec.planted_bias[category] = offset.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mock spec: ") + e.what());
  }
  ValidateMockSpec(spec);
  return spec;
}

std::string SerializeMockSpec(const MockScorerSpec& spec) {
  ordered_json j;
  j["base_mean"] = spec.base_mean;
  j["noise_sd"] = spec.noise_sd;
  j["planted_bias"] = ordered_json::object();
  for (const auto& [category, offset] : spec.planted_bias) {
    j["planted_bias"][category] = offset;
  }
  j["seed"] = spec.seed;
  return j.dump();
}

SentimentOutput MockScore(const MockScorerSpec& spec,
                          const EvaluationSentence& sentence) {
  double offset = 0.0;
  if (auto it = spec.planted_bias.find(sentence.category); it != spec.planted_bias.end()) {
    offset = it->second;
  }
  double noise = 0.0;
  if (spec.noise_sd > 0.0) {
    noise = spec.noise_sd *
            rng::GaussianFromKey(rng::DeriveSeed(spec.seed, {rng::HashString(sentence.id)}));
  }
  const double score = std::clamp(spec.base_mean + offset + noise, 0.0, 1.0);
  return SentimentOutput::FromScore(score);
}

}  // namespace bab
