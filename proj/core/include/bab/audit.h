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

#ifndef BAB_AUDIT_H_
#define BAB_AUDIT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bab/corpus.h"
#include "bab/metrics.h"
#include "bab/scoring.h"
#include "bab/stats.h"

namespace bab {

// Direction label of a verdict or split with no established bias.
inline constexpr std::string_view kNoDirection = "none";

struct AuditConfig {
  double alpha = 0.01;
  double power_threshold = 0.8;
  int n_splits = 10;
  double split_fraction = 0.10;
  int consolidation_repetitions = 100;
  // A direction is declared when it is established in at least this many
  // splits.
  int consistency_quorum = 8;
  std::uint64_t seed = 0;
  bool disjoint_splits = false;
  // Decide nominal relatedness from one chi-square over every sentence of
  // the dimension instead of the per-split quorum.
  bool chi_square_full_corpus = false;

  // Throws UsageError on any out-of-range field.
  void Validate() const;
  bool operator==(const AuditConfig&) const = default;
};

// JSON object with the AuditConfig field names. Parsing overlays the keys
// present onto `base` and validates the result; unknown keys and wrong
// types are a UsageError.
std::string SerializeConfig(const AuditConfig& config);
AuditConfig ParseConfig(std::string_view json_text, const AuditConfig& base = {});

// A fine-tuned model is named "<dataset>-<base>", e.g. "D1-mBERT". Ids
// without a '-' use the whole id as the dataset and "default" as the base.
struct ModelRef {
  std::string model_id;
  std::string base;
  std::string dataset;

  static ModelRef Parse(std::string_view model_id);
};

// One observation: the two sides of an evaluation pair, or a consolidated
// pair built from equal-size unpaired samples (label mode, mean score).
struct Observation {
  SentimentOutput first;
  SentimentOutput second;
};

// Label mode and score mean of a sample. A tied label vote falls back to
// the 0.5 threshold on the mean.
SentimentOutput Consolidate(std::span<const SentimentOutput> outputs);

struct SplitEvidence {
  int index = 0;
  std::int64_t n_observations = 0;
  TestResult nominal;  // chi-square on category x label
  bool nominal_significant = false;
  std::optional<TestResult> normality;  // Shapiro-Wilk on the differences
  TestResult two_sided;
  std::optional<TestResult> directional;
  std::string direction{kNoDirection};
  PcrResult pcr;
  PcmSet pcm;
};

struct BiasVerdict {
  std::string model_id;
  std::string model_base;
  std::string dataset_id;
  std::string dimension;
  std::array<std::string, 2> categories;
  AuditConfig config;

  bool nominal_related = false;
  int nominal_significant_splits = 0;
  std::optional<TestResult> nominal_full;

  std::string direction{kNoDirection};
  std::vector<SplitEvidence> split_evidence;
  std::vector<std::string> pcr_directions;
  PcmSet pcm_mean;  // per-split values averaged over splits

  // Splits whose score comparison established `category`.
  int DirectionalCount(std::string_view category) const;
};

// Builds the per-split observations of a dimension. Exposed for tests.
std::vector<std::vector<Observation>> BuildObservations(const ModelScores& scores,
                                                        const Corpus& corpus,
                                                        std::string_view dimension,
                                                        const AuditConfig& config);

// Per split: chi-square on nominal outputs, a Shapiro-Wilk gate on the
// score differences choosing paired t or Wilcoxon, a two-sided test, and,
// when it is significant with enough power, the one-sided tests that fix
// the direction. The verdict direction needs `consistency_quorum` splits.
BiasVerdict RunRq1(const ModelScores& scores, const Corpus& corpus,
                   std::string_view dimension, const AuditConfig& config);

// Audits every (model, dimension) cell, in parallel. Results are ordered by
// dimension (corpus order) then model id.
std::vector<BiasVerdict> RunAudit(std::span<const ModelScores> models,
                                  const Corpus& corpus, const AuditConfig& config);

struct DeveloperProfile {
  std::string dataset_id;
  // dimension -> developer categories (e.g. {"Muslim", "Agnostic"}).
  std::map<std::string, std::vector<std::string>> categories;

  bool available() const;
  // Categories joined by '+', or empty when the dimension is unknown.
  std::string GroupLabel(std::string_view dimension) const;
};

// Newline-delimited {dataset_id, <dimension>: [..], ...} records.
std::vector<DeveloperProfile> ParseProfiles(std::string_view content);
std::vector<DeveloperProfile> LoadProfiles(const std::filesystem::path& path);

struct Rq2Result {
  std::string dimension;
  std::vector<std::string> row_labels;     // toward A, toward B, no/rare
  std::vector<std::string> column_labels;  // developer groups
  ContingencyTable table;
  TestResult test;
  std::vector<std::string> models;  // verdicts that entered the table

  bool operator==(const Rq2Result& o) const {
    return dimension == o.dimension && row_labels == o.row_labels &&
           column_labels == o.column_labels && table.counts == o.table.counts &&
           models == o.models;
  }
};

// Bias direction vs. developer demographics. Only verdicts whose dataset
// has a profile listing categories for `dimension` take part.
Rq2Result RunRq2(std::span<const BiasVerdict> verdicts,
                 std::span<const DeveloperProfile> profiles,
                 const IdentityDimension& dimension, double alpha = 0.01);

struct HeatCell {
  std::string model_base;
  std::string dataset_id;
  std::array<int, 2> counts = {0, 0};  // PCR wins per category
  int ties = 0;
  Consistency consistency;
  PcmSet pcm;
  std::string verdict_direction{kNoDirection};

  // Wins of the first category minus wins of the second.
  int HeatValue() const { return counts[0] - counts[1]; }
  bool operator==(const HeatCell&) const = default;
};

struct ComparisonMatrix {
  std::string dimension;
  std::array<std::string, 2> categories;
  std::vector<std::string> bases;     // sorted
  std::vector<std::string> datasets;  // natural order (D2 before D10)
  std::vector<HeatCell> cells;        // datasets-major, bases-minor

  const HeatCell* Find(std::string_view base, std::string_view dataset) const;
  bool operator==(const ComparisonMatrix&) const = default;
};

// One matrix per dimension, in order of first appearance.
std::vector<ComparisonMatrix> RunRq3(std::span<const BiasVerdict> verdicts);

enum class Preference { kFirst, kSecond, kEquivalent };

// Prefers the cell whose PCR direction is less consistent (smaller winning
// count); on equal counts, the lower absolute-mean PCM.
Preference CompareCells(const HeatCell& a, const HeatCell& b);

// "D2" < "D10"; falls back to plain comparison for non-numeric parts.
bool NaturalLess(std::string_view a, std::string_view b);

}  // namespace bab

#endif  // BAB_AUDIT_H_
