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

#ifndef BAB_STATS_H_
#define BAB_STATS_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bab {

// Alternative hypothesis of a paired test on d = x - y.
//   kLeft:  mean(x) < mean(y)
//   kRight: mean(x) > mean(y)
enum class Tail { kTwoSided, kLeft, kRight };

enum class TestKind { kShapiroWilk, kPairedT, kWilcoxonSignedRank, kChiSquare };

std::string_view TailName(Tail tail);
std::string_view TestKindName(TestKind kind);
Tail ParseTail(std::string_view name);
TestKind ParseTestKind(std::string_view name);

struct TestResult {
  TestKind test = TestKind::kPairedT;
  double statistic = 0.0;
  double p_value = 1.0;
  Tail tail = Tail::kTwoSided;
  // Pairs for the paired tests, sample size for Shapiro-Wilk, table total
  // for chi-square.
  std::int64_t n = 0;
  // Cohen's d (paired t), matched-pairs rank-biserial r (Wilcoxon),
  // Cohen's w (chi-square). Zero for Shapiro-Wilk.
  double effect_size = 0.0;
  // Post-hoc power at the observed effect. Zero where not applicable.
  double power = 0.0;
  std::optional<double> df;

  // Wilcoxon: number of zero differences dropped before ranking.
  std::int64_t dropped_zeros = 0;
  // Wilcoxon: p-value from full enumeration rather than the normal
  // approximation.
  bool exact = false;
  // Chi-square: table collapsed to a single row or column after pruning.
  bool degenerate = false;

  bool Significant(double alpha) const { return p_value < alpha; }
};

// Row-major r x c table of non-negative counts.
struct ContingencyTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> counts;

  ContingencyTable() = default;
  ContingencyTable(int r, int c) : rows(r), cols(c), counts(r * c, 0) {}
  ContingencyTable(std::initializer_list<std::initializer_list<std::int64_t>> init);

  std::int64_t& at(int r, int c) { return counts[r * cols + c]; }
  std::int64_t at(int r, int c) const { return counts[r * cols + c]; }
  std::int64_t Total() const;
  ContingencyTable Transposed() const;
};

// Exact-vs-approximate switch for the signed-rank test: at most this many
// nonzero differences are handled by enumeration.
inline constexpr int kWilcoxonExactLimit = 20;

// Shapiro-Wilk W with Royston's p-value approximation (AS R94).
// Requires 3 <= n <= 5000 and a non-constant sample.
TestResult ShapiroWilk(std::span<const double> sample);

TestResult PairedT(std::span<const double> x, std::span<const double> y,
                   Tail tail, double alpha);

// Signed-rank test on x - y. Zero differences are dropped; |d| ties get
// mid-ranks. Reported statistic is W+, the rank sum of positive differences.
TestResult WilcoxonSignedRank(std::span<const double> x,
                              std::span<const double> y, Tail tail,
                              double alpha);

struct ChiSquareOptions {
  double alpha = 0.01;
  // Yates correction, applied to 2x2 tables only.
  bool continuity_correction = false;
};

// Pearson chi-square test of independence. All-zero rows and columns are
// pruned first; a table that collapses to one row or column yields
// statistic 0, p = 1 and `degenerate` set.
TestResult ChiSquareIndependence(const ContingencyTable& table,
                                 const ChiSquareOptions& options = {});

// Post-hoc power at a given standardized effect.
//
// kPairedT: noncentral t with df = n - 1, noncentrality d * sqrt(n).
// kWilcoxonSignedRank: same, on the effective sample size (3 / pi) * n.
// kChiSquare: noncentral chi-square with noncentrality n * w^2; `tail` is
//   ignored and `df` is required.
double PostHocPower(TestKind test, double effect_size, double n, double alpha,
                    Tail tail, std::optional<double> df = std::nullopt);

}  // namespace bab

#endif  // BAB_STATS_H_
