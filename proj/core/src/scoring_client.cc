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
#include <atomic>
#include <exception>
#include <nlohmann/json.hpp>
#include <thread>

#include "bab/errors.h"
#include "bab/scoring.h"
#include "httplib.h"

namespace bab {
namespace {

using nlohmann::json;

void SplitEndpoint(const std::string& endpoint, std::string* base, std::string* path) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos || endpoint.compare(0, scheme, "http") != 0) {
    throw UsageError("endpoint must look like http://host[:port][/prefix], got '" +
                     endpoint + "'");
  }
  const auto slash = endpoint.find('/', scheme + 3);
  *base = endpoint.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : endpoint.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  *path = prefix + "/score";
}

}  // namespace

std::string BuildScoreRequest(std::string_view model_id,
                              std::span<const std::string> texts) {
  json body;
  body["model_id"] = std::string(model_id);
  body["texts"] = json::array();
  for (const auto& t : texts) body["texts"].push_back(t);
  return body.dump();
}

std::vector<SentimentOutput> ParseScoreResponse(std::string_view body,
                                                std::size_t expected_count) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw TransportError(std::string("malformed response: ") + e.what());
  }
  if (!j.is_object() || !j.contains("results") || !j["results"].is_array()) {
    throw TransportError("malformed response: missing 'results' array");
  }
  const json& results = j["results"];
  if (results.size() != expected_count) {
    throw TransportError("malformed response: expected " + std::to_string(expected_count) +
                         " results, got " + std::to_string(results.size()));
  }
  std::vector<SentimentOutput> out;
  out.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const json& r = results[i];
    if (!r.is_object() || !r.contains("score") || !r["score"].is_number()) {
      throw TransportError("malformed response: result " + std::to_string(i) +
                           " lacks a numeric 'score'");
    }
    const double score = r["score"].get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
      throw ValidationError("response score " + r["score"].dump() + " at index " +
                            std::to_string(i) + " outside [0, 1]");
    }
    SentimentOutput output = SentimentOutput::FromScore(score);
    if (r.contains("label") && !r["label"].is_null()) {
      if (!r["label"].is_string()) {
        throw TransportError("malformed response: label at index " + std::to_string(i) +
                             " is not a string");
      }
      const std::string label = r["label"].get<std::string>();
      if (label != "positive" && label != "negative") {
        throw TransportError("malformed response: unknown label '" + label +
                             "' at index " + std::to_string(i));
      }
      output.label = ParseLabel(label);
    }
    out.push_back(output);
  }
  return out;
}

ScoringClient::ScoringClient(std::string endpoint, ClientOptions options)
    : options_(std::move(options)) {
  SplitEndpoint(endpoint, &scheme_host_port_, &path_);
  if (options_.max_batch == 0) throw UsageError("max_batch must be positive");
  if (options_.max_in_flight == 0) throw UsageError("max_in_flight must be positive");
}

std::vector<SentimentOutput> ScoringClient::ScoreBatch(
    std::string_view model_id, std::span<const std::string> texts) const {
  if (texts.size() > options_.max_batch) {
    throw UsageError("batch of " + std::to_string(texts.size()) +
                     " exceeds the maximum of " + std::to_string(options_.max_batch));
  }
  if (texts.empty()) return {};
  const std::string body = BuildScoreRequest(model_id, texts);

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);

  std::string last_error;
  const std::size_t attempts = options_.backoff.size() + 1;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.backoff[attempt - 1]);
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "request to " + scheme_host_port_ + path_ + " failed: " +
                   httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server returned status " + std::to_string(res->status) + ": " + res->body;
      continue;
    }
    if (res->status != 200) {
      std::string message = res->body;
      try {
        const json err = json::parse(res->body);
        if (err.contains("error") && err["error"].is_string()) {
          message = err["error"].get<std::string>();
        }
      } catch (const json::exception&) {
      }
      throw TransportError("server rejected request with status " +
                           std::to_string(res->status) + ": " + message);
    }
    return ParseScoreResponse(res->body, texts.size());
  }
  throw TransportError(last_error + " (gave up after " + std::to_string(attempts) +
                       " attempts)");
}

std::vector<SentimentOutput> ScoringClient::ScoreAll(
    std::string_view model_id, std::span<const std::string> texts) const {
  const std::size_t batch = options_.max_batch;
  const std::size_t n_batches = (texts.size() + batch - 1) / batch;
  std::vector<SentimentOutput> out(texts.size());
  if (n_batches == 0) return out;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_batches || failed.load()) return;
      const std::size_t begin = b * batch;
      const std::size_t count = std::min(batch, texts.size() - begin);
      try {
        auto results = ScoreBatch(model_id, texts.subspan(begin, count));
        std::copy(results.begin(), results.end(), out.begin() + begin);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  const std::size_t n_workers = std::min(options_.max_in_flight, n_batches);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < n_workers; ++i) workers.emplace_back(worker);
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace bab
