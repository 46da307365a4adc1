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

#ifndef BAB_CORPUS_H_
#define BAB_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bab {

// An identity axis with exactly two ordered categories. The first category
// is the "left" side of every pair and the first argument of every paired
// test, so a positive score difference means a lean toward it.
struct IdentityDimension {
  std::string name;
  std::array<std::string, 2> categories;

  // 0 or 1, or -1 when `category` does not belong to this dimension.
  int IndexOf(std::string_view category) const;
  bool operator==(const IdentityDimension&) const = default;
};

// Known dimensions. Default() holds gender, religion and nationality.
class DimensionRegistry {
 public:
  static DimensionRegistry Default();

  // Throws ValidationError on a duplicate name or identical categories.
  // Categories may not use the reserved labels "tie" and "none".
  void Add(IdentityDimension dimension);
  const IdentityDimension* Find(std::string_view name) const;
  const std::vector<IdentityDimension>& dimensions() const { return dims_; }

 private:
  std::vector<IdentityDimension> dims_;
};

enum class Expression { kExplicit, kImplicit };

std::string_view ExpressionName(Expression e);

struct EvaluationSentence {
  std::string id;
  std::string text;
  std::string dimension;
  std::string category;
  Expression expression = Expression::kExplicit;
  std::optional<std::string> pair_id;

  bool operator==(const EvaluationSentence&) const = default;
};

struct EvaluationPair {
  std::string pair_id;
  std::string dimension;
  Expression expression = Expression::kExplicit;
  EvaluationSentence left;   // first category of the dimension
  EvaluationSentence right;  // second category

  bool operator==(const EvaluationPair&) const = default;
};

// Immutable once loaded. Pairs keep the order in which their pair_id first
// appeared in the source; unpaired sentences keep file order.
struct Corpus {
  std::vector<IdentityDimension> dimensions;  // those present, registry order
  std::vector<EvaluationPair> pairs;
  std::vector<EvaluationSentence> unpaired;
  std::string provenance;

  const IdentityDimension& Dimension(std::string_view name) const;
  std::vector<const EvaluationPair*> PairsFor(std::string_view dimension) const;
  std::vector<const EvaluationSentence*> UnpairedFor(
      std::string_view dimension, std::string_view category) const;
  // Every sentence (paired and unpaired) of a dimension.
  std::vector<const EvaluationSentence*> SentencesFor(
      std::string_view dimension) const;
  std::size_t SentenceCount() const { return 2 * pairs.size() + unpaired.size(); }

  bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { kJsonl, kTsv };

CorpusFormat ParseCorpusFormat(std::string_view name);

// Parses and validates a corpus. Lines starting with '#' are provenance
// notes; blank lines are skipped. TSV may start with a header row naming
// the columns. Every failure is a ValidationError; record-level failures
// name the 1-based line.
Corpus ParseCorpus(std::string_view content, CorpusFormat format,
                   const DimensionRegistry& registry = DimensionRegistry::Default());
Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                  const DimensionRegistry& registry = DimensionRegistry::Default());

// Canonical serialization: provenance lines, then pairs (left, right), then
// unpaired sentences.
std::string SerializeCorpus(const Corpus& corpus, CorpusFormat format);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path,
                CorpusFormat format);

struct SplitPlan {
  std::uint64_t seed = 0;
  int n_splits = 10;
  double fraction = 0.10;
  // Partition the pairs into n_splits disjoint folds instead of drawing
  // independent subsamples; `fraction` is ignored.
  bool disjoint = false;
};

struct Split {
  int index = 0;
  std::vector<std::string> pair_ids;  // corpus order

  bool operator==(const Split&) const = default;
};

struct UnpairedSample {
  std::vector<EvaluationSentence> first;   // first category of the dimension
  std::vector<EvaluationSentence> second;

  bool operator==(const UnpairedSample&) const = default;
};

// floor(fraction * n), tolerant of fractions like 0.29 that are not exact
// in binary.
std::size_t FloorFraction(double fraction, std::size_t n);

// Equal-size samples without replacement from both categories, sized to
// floor(fraction * smaller category). Determined by (seed, dimension,
// repetition).
UnpairedSample SampleUnpaired(const Corpus& corpus, std::string_view dimension,
                              double fraction, std::uint64_t seed,
                              std::int64_t repetition);

// Independent subsamples of round(fraction * pairs) pair ids each (may
// overlap across splits), or disjoint folds when plan.disjoint is set.
std::vector<Split> MakeSplits(const Corpus& corpus, std::string_view dimension,
                              const SplitPlan& plan);

}  // namespace bab

#endif  // BAB_CORPUS_H_
