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

// Randomized invariants. Every case is seeded so failures reproduce.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "bab/corpus.h"
#include "bab/errors.h"
#include "bab/metrics.h"
#include "bab/rng.h"
#include "bab/stats.h"

namespace bab {
namespace {

constexpr int kCases = 10000;

double Draw(rng::Stream& s, double lo, double hi) { return lo + (hi - lo) * s.Uniform(); }

std::vector<std::pair<double, double>> RandomPairs(rng::Stream& s) {
  const int n = 1 + static_cast<int>(s.Below(60));
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < n; ++i) {
    // Mix continuous scores with the endpoints and exact ties.
    auto score = [&] {
      switch (s.Below(8)) {
        case 0: return 0.0;
        case 1: return 1.0;
        default: return s.Uniform();
      }
    };
    const double a = score();
    pairs.emplace_back(a, s.Below(10) == 0 ? a : score());
  }
  return pairs;
}

TEST(MetricProperties, BoundsSumAndAntisymmetry) {
  rng::Stream s(101);
  for (int c = 0; c < kCases; ++c) {
    const auto pairs = RandomPairs(s);
    const PcmSet m = PcmAll(pairs);
    const double n = static_cast<double>(pairs.size());
    ASSERT_LE(std::fabs(m.signed_mean), m.abs_mean + 1e-15) << c;
    ASSERT_LE(m.abs_mean, 1.0) << c;
    ASSERT_GE(m.abs_mean, 0.0) << c;
    ASSERT_NEAR(m.signed_sum, n * m.signed_mean, 1e-12 * n) << c;
    ASSERT_EQ(m.n_pairs, static_cast<std::int64_t>(pairs.size()));

    std::vector<std::pair<double, double>> swapped;
    for (auto [a, b] : pairs) swapped.emplace_back(b, a);
    const PcmSet w = PcmAll(swapped);
    ASSERT_NEAR(w.signed_mean, -m.signed_mean, 1e-12) << c;
    ASSERT_NEAR(w.abs_mean, m.abs_mean, 1e-12) << c;

    // Pair order does not matter beyond rounding.
    auto shuffled = pairs;
    const auto perm = rng::Permutation(pairs.size(), s);
    for (size_t i = 0; i < perm.size(); ++i) shuffled[i] = pairs[perm[i]];
    ASSERT_NEAR(PcmAll(shuffled).signed_mean, m.signed_mean, 1e-12) << c;
  }
}

TEST(MetricProperties, PcrDuplicationInvariance) {
  rng::Stream s(102);
  for (int c = 0; c < kCases; ++c) {
    ScoredGroup a{"a", {}}, b{"b", {}};
    for (auto* g : {&a, &b}) {
      const int n = 1 + static_cast<int>(s.Below(25));
      for (int i = 0; i < n; ++i) g->outputs.push_back(SentimentOutput::FromScore(s.Uniform()));
    }
    const PcrResult base = Pcr(a, b);
    const int k = 2 + static_cast<int>(s.Below(5));
    ScoredGroup ak{"a", {}}, bk{"b", {}};
    for (int i = 0; i < k; ++i) {
      ak.outputs.insert(ak.outputs.end(), a.outputs.begin(), a.outputs.end());
      bk.outputs.insert(bk.outputs.end(), b.outputs.begin(), b.outputs.end());
    }
    const PcrResult dup = Pcr(ak, bk);
    ASSERT_EQ(dup.direction, base.direction) << c;
    ASSERT_DOUBLE_EQ(dup.first_rate, base.first_rate) << c;
    ASSERT_DOUBLE_EQ(dup.second_rate, base.second_rate) << c;
    // The direction names a category, so argument order does not change it.
    ASSERT_EQ(Pcr(b, a).direction, base.direction) << c;
  }
}

// Pearson statistic computed directly on the pruned table.
double ChiSquareOracle(const ContingencyTable& t) {
  std::vector<double> row(t.rows, 0), col(t.cols, 0);
  double total = 0;
  for (int r = 0; r < t.rows; ++r) {
    for (int c = 0; c < t.cols; ++c) {
      row[r] += t.at(r, c);
      col[c] += t.at(r, c);
      total += t.at(r, c);
    }
  }
  double stat = 0;
  for (int r = 0; r < t.rows; ++r) {
    for (int c = 0; c < t.cols; ++c) {
      if (row[r] == 0 || col[c] == 0) continue;
      const double e = row[r] * col[c] / total;
      stat += (t.at(r, c) - e) * (t.at(r, c) - e) / e;
    }
  }
  return stat;
}

TEST(ChiSquareProperties, PermutationAndTransposeInvariance) {
  rng::Stream s(103);
  int checked = 0;
  for (int c = 0; c < kCases; ++c) {
    ContingencyTable t(2 + static_cast<int>(s.Below(3)), 2 + static_cast<int>(s.Below(3)));
    for (auto& v : t.counts) v = s.Below(4) == 0 ? 0 : static_cast<std::int64_t>(s.Below(30));
    if (t.Total() == 0) continue;
    ++checked;
    const TestResult base = ChiSquareIndependence(t);
    ASSERT_GE(base.p_value, 0.0);
    ASSERT_LE(base.p_value, 1.0);
    ASSERT_NEAR(base.statistic, ChiSquareOracle(t), 1e-9 * (1 + base.statistic)) << c;

    const auto rp = rng::Permutation(t.rows, s);
    const auto cp = rng::Permutation(t.cols, s);
    ContingencyTable p(t.rows, t.cols);
    for (int r = 0; r < t.rows; ++r) {
      for (int k = 0; k < t.cols; ++k) p.at(r, k) = t.at(rp[r], cp[k]);
    }
    for (const ContingencyTable& other : {p, t.Transposed()}) {
      const TestResult r = ChiSquareIndependence(other);
      ASSERT_NEAR(r.statistic, base.statistic, 1e-9 * (1 + base.statistic)) << c;
      ASSERT_NEAR(r.p_value, base.p_value, 1e-12) << c;
      ASSERT_EQ(r.degenerate, base.degenerate) << c;
      ASSERT_EQ(r.df, base.df) << c;
    }
  }
  EXPECT_GT(checked, kCases * 9 / 10);
}

// Wilcoxon tail probabilities by listing all 2^m sign patterns of the
// mid-ranks.
struct BruteWilcoxon {
  double w_plus;
  double p_left;
  double p_right;
};

BruteWilcoxon EnumerateWilcoxon(const std::vector<double>& d) {
  std::vector<double> mags;
  std::vector<bool> pos;
  for (double v : d) {
    if (v == 0) continue;
    mags.push_back(std::fabs(v));
    pos.push_back(v > 0);
  }
  const size_t m = mags.size();
  std::vector<double> rank(m);
  for (size_t i = 0; i < m; ++i) {
    int less = 0, equal = 0;
    for (size_t j = 0; j < m; ++j) {
      less += mags[j] < mags[i];
      equal += mags[j] == mags[i];
    }
    rank[i] = less + (equal + 1) / 2.0;
  }
  double w = 0;
  for (size_t i = 0; i < m; ++i) w += pos[i] ? rank[i] : 0;
  std::uint64_t le = 0, ge = 0;
  const std::uint64_t patterns = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    double s = 0;
    for (size_t i = 0; i < m; ++i) s += (mask >> i & 1) ? rank[i] : 0;
    le += s <= w + 1e-9;
    ge += s >= w - 1e-9;
  }
  return {w, static_cast<double>(le) / patterns, static_cast<double>(ge) / patterns};
}

TEST(WilcoxonProperties, ExactMatchesEnumeration) {
  rng::Stream s(104);
  for (int c = 0; c < 2000; ++c) {
    const int n = 2 + static_cast<int>(s.Below(11));
    std::vector<double> x(n), y(n, 0.0), d(n);
    for (int i = 0; i < n; ++i) {
      // Small integers produce zeros and ties in |d|.
      x[i] = static_cast<double>(static_cast<int>(s.Below(9)) - 4);
      d[i] = x[i];
    }
    const long nonzero = std::count_if(d.begin(), d.end(), [](double v) { return v != 0; });
    if (nonzero < 2) continue;
    const BruteWilcoxon b = EnumerateWilcoxon(d);
    const TestResult two = WilcoxonSignedRank(x, y, Tail::kTwoSided, 0.05);
    const TestResult left = WilcoxonSignedRank(x, y, Tail::kLeft, 0.05);
    const TestResult right = WilcoxonSignedRank(x, y, Tail::kRight, 0.05);
    ASSERT_TRUE(two.exact);
    ASSERT_DOUBLE_EQ(two.statistic, b.w_plus) << c;
    ASSERT_NEAR(left.p_value, b.p_left, 1e-12) << c;
    ASSERT_NEAR(right.p_value, b.p_right, 1e-12) << c;
    ASSERT_NEAR(two.p_value, std::min(1.0, 2 * std::min(b.p_left, b.p_right)), 1e-12) << c;
    ASSERT_EQ(two.dropped_zeros, n - nonzero);
    ASSERT_GE(two.effect_size, -1.0);
    ASSERT_LE(two.effect_size, 1.0);
  }
}

TEST(WilcoxonProperties, NegationSwapsTails) {
  rng::Stream s(105);
  for (int c = 0; c < 2000; ++c) {
    const int n = 3 + static_cast<int>(s.Below(40));
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = s.Uniform();
      y[i] = s.Uniform();
    }
    const TestResult r = WilcoxonSignedRank(x, y, Tail::kRight, 0.05);
    const TestResult l = WilcoxonSignedRank(y, x, Tail::kLeft, 0.05);
    ASSERT_NEAR(r.p_value, l.p_value, 1e-12) << c;
    ASSERT_NEAR(r.effect_size, -l.effect_size, 1e-12) << c;
  }
}

TEST(PowerProperties, BoundedAndSymmetric) {
  rng::Stream s(106);
  for (int c = 0; c < kCases; ++c) {
    const double d = Draw(s, -3, 3);
    const double n = 2 + static_cast<double>(s.Below(500));
    const double alpha = std::array{0.001, 0.01, 0.05}[s.Below(3)];
    for (TestKind k : {TestKind::kPairedT, TestKind::kWilcoxonSignedRank}) {
      if (k == TestKind::kWilcoxonSignedRank && (3 / M_PI) * n <= 1.0) continue;
      const double two = PostHocPower(k, d, n, alpha, Tail::kTwoSided);
      ASSERT_GE(two, 0.0) << c;
      ASSERT_LE(two, 1.0) << c;
      ASSERT_NEAR(two, PostHocPower(k, -d, n, alpha, Tail::kTwoSided), 1e-9) << c;
      const double right = PostHocPower(k, d, n, alpha, Tail::kRight);
      const double left = PostHocPower(k, d, n, alpha, Tail::kLeft);
      ASSERT_GE(right, 0.0);
      ASSERT_LE(right, 1.0);
      ASSERT_NEAR(right, PostHocPower(k, -d, n, alpha, Tail::kLeft), 1e-9) << c;
      // The favoured one-sided test is at least as powerful as the other.
      if (d > 0) ASSERT_GE(right, left) << c;
    }
    const double w = Draw(s, 0, 1);
    const double chi = PostHocPower(TestKind::kChiSquare, w, n, alpha, Tail::kTwoSided,
                                    1 + static_cast<double>(s.Below(4)));
    ASSERT_GE(chi, alpha - 1e-9) << c;
    ASSERT_LE(chi, 1.0) << c;
  }
}

TEST(ShapiroWilkProperties, RangeAndAffineInvariance) {
  rng::Stream s(107);
  for (int c = 0; c < 2000; ++c) {
    const int n = 3 + static_cast<int>(s.Below(200));
    std::vector<double> x(n);
    for (auto& v : x) v = s.Below(3) == 0 ? rng::GaussianFromKey(s.Next()) : s.Uniform();
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    const TestResult r = ShapiroWilk(x);
    ASSERT_GT(r.statistic, 0.0) << c;
    ASSERT_LE(r.statistic, 1.0 + 1e-12) << c;
    ASSERT_GE(r.p_value, 0.0);
    ASSERT_LE(r.p_value, 1.0);
    const double a = Draw(s, 0.1, 10), b = Draw(s, -5, 5);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = a * x[i] + b;
    ASSERT_NEAR(ShapiroWilk(y).statistic, r.statistic, 1e-9) << c;
  }
}

std::string RandomText(rng::Stream& s) {
  static const char* const kPieces[] = {"a", "Z", " ", "\t", "\n", "\\", "\\N", "\"", "জল",
                                        "পানি", "#", ",", "\r"};
  std::string out;
  const int n = static_cast<int>(s.Below(8));
  for (int i = 0; i < n; ++i) out += kPieces[s.Below(std::size(kPieces))];
  return out;
}

TEST(CorpusProperties, SerializationRoundTrip) {
  rng::Stream s(108);
  const DimensionRegistry registry = DimensionRegistry::Default();
  for (int c = 0; c < 1000; ++c) {
    std::string jsonl;
    int next_id = 0;
    auto line = [&](const IdentityDimension& dim, int cat, std::optional<std::string> pid,
                    const std::string& text, const char* expr) {
      jsonl += nlohmann::json{{"id", "s" + std::to_string(next_id++) + RandomText(s)},
                              {"pair_id", pid ? nlohmann::json(*pid) : nlohmann::json(nullptr)},
                              {"dimension", dim.name},
                              {"category", dim.categories[cat]},
                              {"expression", expr},
                              {"text", text}}
                   .dump() +
               "\n";
    };
    for (const auto& dim : registry.dimensions()) {
      if (s.Below(3) == 0) continue;
      const int pairs = static_cast<int>(s.Below(5));
      for (int p = 0; p < pairs; ++p) {
        const std::string pid = dim.name + std::to_string(p) + RandomText(s);
        const char* expr = s.Below(2) ? "explicit" : "implicit";
        // Either member may come first; the texts always differ.
        const int first = static_cast<int>(s.Below(2));
        line(dim, first, pid, "x" + RandomText(s), expr);
        line(dim, 1 - first, pid, "y" + RandomText(s), expr);
      }
      if (s.Below(2)) {
        for (int cat = 0; cat < 2; ++cat) {
          const int n = 1 + static_cast<int>(s.Below(3));
          for (int i = 0; i < n; ++i) line(dim, cat, std::nullopt, RandomText(s), "implicit");
        }
      }
    }
    const Corpus corpus = ParseCorpus(jsonl, CorpusFormat::kJsonl, registry);
    for (CorpusFormat f : {CorpusFormat::kJsonl, CorpusFormat::kTsv}) {
      const std::string text = SerializeCorpus(corpus, f);
      const Corpus back = ParseCorpus(text, f, registry);
      ASSERT_EQ(back, corpus) << c << "\n" << text;
      ASSERT_EQ(SerializeCorpus(back, f), text) << c;
    }
  }
}

}  // namespace
}  // namespace bab
