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

#ifndef BAB_REPORT_H_
#define BAB_REPORT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bab/audit.h"

namespace bab {

inline constexpr int kReportSchemaVersion = 1;

// round(100 * count / total), halves rounded up.
int PercentHalfUp(std::int64_t count, std::int64_t total);

struct DirectionCount {
  std::string direction;  // a category or kNoDirection
  int count = 0;
  int percent = 0;
  bool operator==(const DirectionCount&) const = default;
};

struct DimensionSummary {
  std::string dimension;
  int total = 0;
  std::vector<DirectionCount> rows;  // first category, second, none
  bool operator==(const DimensionSummary&) const = default;

  const DirectionCount* Find(std::string_view direction) const;
};

// One summary per dimension in order of first appearance. Throws
// ValidationError on an empty list.
std::vector<DimensionSummary> Summarize(std::span<const BiasVerdict> verdicts);

struct SplitRow {
  int index = 0;
  std::int64_t n_observations = 0;
  double chi_square_p = 1.0;
  bool chi_square_significant = false;
  std::string test;  // paired_t or wilcoxon_signed_rank
  double statistic = 0.0;
  double p_value = 1.0;
  double effect_size = 0.0;
  double power = 0.0;
  std::optional<double> directional_p;
  std::string direction{kNoDirection};
  std::string pcr_direction;
  bool operator==(const SplitRow&) const = default;
};

struct VerdictRow {
  std::string model_id;
  std::string model_base;
  std::string dataset_id;
  std::string direction{kNoDirection};
  std::array<int, 2> directional_splits = {0, 0};
  bool nominal_related = false;
  int nominal_significant_splits = 0;
  std::optional<double> nominal_full_p;
  std::vector<SplitRow> splits;
  bool operator==(const VerdictRow&) const = default;
};

struct DimensionReport {
  std::string dimension;
  std::array<std::string, 2> categories;
  std::vector<VerdictRow> verdicts;  // by base, then natural dataset order
  ComparisonMatrix heatmap;
  DimensionSummary summary;
  std::optional<Rq2Result> rq2;
  bool operator==(const DimensionReport&) const = default;
};

struct Provenance {
  std::string corpus_id;
  std::string corpus_digest;
  std::vector<std::string> model_ids;
  std::string toolkit_version;
  bool operator==(const Provenance&) const = default;
};

struct AuditReport {
  int schema_version = kReportSchemaVersion;
  AuditConfig config;
  Provenance provenance;
  std::vector<DimensionReport> dimensions;
  bool operator==(const AuditReport&) const = default;
};

// Assembles a report from verdicts sharing one config. `rq2` entries are
// matched to dimensions by name.
AuditReport BuildReport(std::span<const BiasVerdict> verdicts,
                        std::span<const Rq2Result> rq2, Provenance provenance);

enum class ReportFormat { kJson, kCsv, kMarkdown };

ReportFormat ParseReportFormat(std::string_view name);  // UsageError if unknown
std::string_view ReportFormatName(ReportFormat format);

// Deterministic rendering. Metric values are rounded to 4 decimals,
// percentages are integers, config values are echoed exactly. The CSV
// format is the heatmap: one row per (dimension, dataset), one column pair
// per model base.
std::string Render(const AuditReport& report, ReportFormat format);

// Inverse of the JSON rendering; Render(ParseReportJson(Render(r, kJson)),
// kJson) reproduces the input bytes.
AuditReport ParseReportJson(std::string_view json_text);

// "D1, D2, D4-D6": runs of three or more consecutive ids are collapsed.
std::string CompressIds(std::vector<std::string> ids);

}  // namespace bab

#endif  // BAB_REPORT_H_
