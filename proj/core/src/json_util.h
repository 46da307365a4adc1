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

#ifndef BAB_SRC_JSON_UTIL_H_
#define BAB_SRC_JSON_UTIL_H_

#include <cmath>
#include <nlohmann/json.hpp>

#include "bab/audit.h"

namespace bab::internal {

using OrderedJson = nlohmann::ordered_json;

// Rounds to 4 decimals; never yields negative zero.
inline double Round4(double x) {
  if (!std::isfinite(x)) return x;
  const double r = std::round(x * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

OrderedJson ConfigToJson(const AuditConfig& config);
AuditConfig ConfigFromJson(const nlohmann::json& j, const AuditConfig& base);

}  // namespace bab::internal

#endif  // BAB_SRC_JSON_UTIL_H_
