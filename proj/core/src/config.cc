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

#include <nlohmann/json.hpp>

#include "bab/audit.h"
#include "bab/errors.h"
#include "json_util.h"

namespace bab {
namespace internal {

OrderedJson ConfigToJson(const AuditConfig& c) {
  OrderedJson j;
  j["alpha"] = c.alpha;
  j["power_threshold"] = c.power_threshold;
  j["n_splits"] = c.n_splits;
  j["split_fraction"] = c.split_fraction;
  j["consolidation_repetitions"] = c.consolidation_repetitions;
  j["consistency_quorum"] = c.consistency_quorum;
  j["seed"] = c.seed;
  j["disjoint_splits"] = c.disjoint_splits;
  j["chi_square_full_corpus"] = c.chi_square_full_corpus;
  return j;
}

AuditConfig ConfigFromJson(const nlohmann::json& j, const AuditConfig& base) {
  if (!j.is_object()) throw UsageError("audit config must be a JSON object");
  AuditConfig c = base;
  for (const auto& [key, value] : j.items()) {
    auto bad = [&](const char* want) {
      throw UsageError("audit config: '" + key + "' must be " + want + ", got " + value.dump());
    };
    auto number = [&]() {
      if (!value.is_number()) bad("a number");
      return value.get<double>();
    };
    auto integer = [&]() {
      if (!value.is_number_integer()) bad("an integer");
      return value.get<int>();
    };
    auto boolean = [&]() {
      if (!value.is_boolean()) bad("a boolean");
      return value.get<bool>();
    };
    if (key == "alpha") {
      c.alpha = number();
    } else if (key == "power_threshold") {
      c.power_threshold = number();
    } else if (key == "n_splits") {
      c.n_splits = integer();
    } else if (key == "split_fraction") {
      c.split_fraction = number();
    } else if (key == "consolidation_repetitions") {
      c.consolidation_repetitions = integer();
    } else if (key == "consistency_quorum") {
      c.consistency_quorum = integer();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) bad("a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "disjoint_splits") {
      c.disjoint_splits = boolean();
    } else if (key == "chi_square_full_corpus") {
      c.chi_square_full_corpus = boolean();
    } else {
      throw UsageError("audit config: unknown key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

}  // namespace internal

std::string SerializeConfig(const AuditConfig& config) {
  return internal::ConfigToJson(config).dump(2) + "\n";
}

AuditConfig ParseConfig(std::string_view json_text, const AuditConfig& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("audit config is not valid JSON: ") + e.what());
  }
  return internal::ConfigFromJson(j, base);
}

}  // namespace bab
