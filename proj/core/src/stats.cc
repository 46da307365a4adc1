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

#include "bab/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bab/distributions.h"
#include "bab/errors.h"

namespace bab {
namespace {

double Polynomial(std::span<const double> coefficients, double x) {
  double result = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    result = result * x + *it;
  }
  return result;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd Describe(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

std::vector<double> Differences(std::span<const double> x,
                                std::span<const double> y) {
  if (x.size() != y.size()) {
    throw StatsError("paired samples differ in length (" +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  std::vector<double> d(x.size());
  for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}

// p-values of a symmetric null for the three alternatives.
double CombineTails(Tail tail, double p_left, double p_right) {
  switch (tail) {
    case Tail::kLeft:
      return p_left;
    case Tail::kRight:
      return p_right;
    case Tail::kTwoSided:
      return std::min(1.0, 2.0 * std::min(p_left, p_right));
  }
  return 1.0;
}

double Clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Mid-ranks of |d| doubled so they stay integral: ranks 1..m map to 2..2m
// and a tie group spanning ranks [lo, hi] gets lo + hi.
std::vector<std::int64_t> DoubledMidRanks(std::span<const double> magnitudes,
                                          std::vector<std::int64_t>* tie_sizes) {
  const size_t m = magnitudes.size();
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return magnitudes[a] < magnitudes[b];
  });
  std::vector<std::int64_t> ranks(m);
  size_t i = 0;
  while (i < m) {
    size_t j = i;
    while (j + 1 < m && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
    const auto doubled = static_cast<std::int64_t>(i + 1 + j + 1);
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
    if (tie_sizes != nullptr && j > i) {
      tie_sizes->push_back(static_cast<std::int64_t>(j - i + 1));
    }
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::string_view TailName(Tail tail) {
  switch (tail) {
    case Tail::kTwoSided:
      return "two_sided";
    case Tail::kLeft:
      return "left";
    case Tail::kRight:
      return "right";
  }
  return "two_sided";
}

std::string_view TestKindName(TestKind kind) {
  switch (kind) {
    case TestKind::kShapiroWilk:
      return "shapiro_wilk";
    case TestKind::kPairedT:
      return "paired_t";
    case TestKind::kWilcoxonSignedRank:
      return "wilcoxon_signed_rank";
    case TestKind::kChiSquare:
      return "chi_square";
  }
  return "paired_t";
}

Tail ParseTail(std::string_view name) {
  for (Tail t : {Tail::kTwoSided, Tail::kLeft, Tail::kRight}) {
    if (TailName(t) == name) return t;
  }
  throw ValidationError("unknown tail '" + std::string(name) + "'");
}

TestKind ParseTestKind(std::string_view name) {
  for (TestKind k : {TestKind::kShapiroWilk, TestKind::kPairedT,
                     TestKind::kWilcoxonSignedRank, TestKind::kChiSquare}) {
    if (TestKindName(k) == name) return k;
  }
  throw ValidationError("unknown test kind '" + std::string(name) + "'");
}

ContingencyTable::ContingencyTable(
    std::initializer_list<std::initializer_list<std::int64_t>> init) {
  rows = static_cast<int>(init.size());
  cols = rows > 0 ? static_cast<int>(init.begin()->size()) : 0;
  for (const auto& row : init) {
    if (static_cast<int>(row.size()) != cols) {
      throw ValidationError("contingency table rows have unequal lengths");
    }
    counts.insert(counts.end(), row.begin(), row.end());
  }
}

std::int64_t ContingencyTable::Total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ContingencyTable ContingencyTable::Transposed() const {
  ContingencyTable t(cols, rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

TestResult ShapiroWilk(std::span<const double> sample) {
  const int n = static_cast<int>(sample.size());
  if (n < 3 || n > 5000) {
    throw StatsError("Shapiro-Wilk needs 3 <= n <= 5000, got n = " +
                     std::to_string(n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  if (x.front() == x.back()) throw StatsError("Shapiro-Wilk: zero variance");

  // Coefficients for the normalized expected order statistics.
  static constexpr double kC1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr double kC2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double kC3[] = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static constexpr double kC4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double kC5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double kC6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double kG[] = {-2.273, 0.459};

  const int half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (int i = 0; i < half; ++i) {
      m[i] = dist::NormalQuantile((i + 1 - 0.375) / (n + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
    const double a1 = Polynomial(kC1, rsn) - m[0] / ssumm2;
    int first_scaled;
    double fac;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + Polynomial(kC2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first_scaled = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (int i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  const MeanSd stats = Describe(x);
  const double ss = stats.sd * stats.sd * (n - 1);
  double numerator = 0.0;
  for (int i = 0; i < half; ++i) numerator += a[i] * (x[n - 1 - i] - x[i]);
  const double w = std::min(1.0, numerator * numerator / ss);

  double p;
  if (n == 3) {
    p = (6.0 / M_PI) * (std::asin(std::sqrt(w)) - M_PI / 3.0);
  } else {
    double y = std::log1p(-w);
    double mean, sd;
    if (n <= 11) {
      const double gamma = Polynomial(kG, n);
      if (y >= gamma) {
        p = 0.0;
        TestResult r;
        r.test = TestKind::kShapiroWilk;
        r.statistic = w;
        r.p_value = p;
        r.n = n;
        return r;
      }
      y = -std::log(gamma - y);
      mean = Polynomial(kC3, n);
      sd = std::exp(Polynomial(kC4, n));
    } else {
      const double log_n = std::log(static_cast<double>(n));
      mean = Polynomial(kC5, log_n);
      sd = std::exp(Polynomial(kC6, log_n));
    }
    p = dist::NormalSf((y - mean) / sd);
  }
  TestResult r;
  r.test = TestKind::kShapiroWilk;
  r.statistic = w;
  r.p_value = Clamp01(p);
  r.n = n;
  return r;
}

TestResult PairedT(std::span<const double> x, std::span<const double> y,
                   Tail tail, double alpha) {
  const std::vector<double> d = Differences(x, y);
  const auto n = static_cast<std::int64_t>(d.size());
  if (n < 2) throw StatsError("paired t-test needs at least 2 pairs");
  const MeanSd s = Describe(d);
  if (s.sd == 0.0) {
    throw StatsError(s.mean == 0.0
                         ? "paired t-test: all differences are zero"
                         : "paired t-test: differences have zero variance");
  }
  const double df = static_cast<double>(n - 1);
  const double t = s.mean / (s.sd / std::sqrt(static_cast<double>(n)));
  const double p_left = dist::StudentTCdf(t, df);
  const double p_right = dist::StudentTSf(t, df);
  const double effect = s.mean / s.sd;
  TestResult r;
  r.test = TestKind::kPairedT;
  r.statistic = t;
  r.p_value = Clamp01(CombineTails(tail, p_left, p_right));
  r.tail = tail;
  r.n = n;
  r.effect_size = effect;
  r.df = df;
  r.power = PostHocPower(TestKind::kPairedT, effect, static_cast<double>(n),
                         alpha, tail);
  return r;
}

TestResult WilcoxonSignedRank(std::span<const double> x,
                              std::span<const double> y, Tail tail,
                              double alpha) {
  const std::vector<double> d = Differences(x, y);
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (double v : d) {
    if (v == 0.0) continue;
    magnitudes.push_back(std::fabs(v));
    positive.push_back(v > 0.0);
  }
  const auto m = static_cast<std::int64_t>(magnitudes.size());
  if (m == 0) throw StatsError("Wilcoxon signed-rank: all differences are zero");
  if (m < 2) {
    throw StatsError("Wilcoxon signed-rank needs at least 2 nonzero differences");
  }

  std::vector<std::int64_t> tie_sizes;
  const std::vector<std::int64_t> ranks = DoubledMidRanks(magnitudes, &tie_sizes);
  std::int64_t w_plus2 = 0;
  for (size_t i = 0; i < ranks.size(); ++i) {
    if (positive[i]) w_plus2 += ranks[i];
  }
  const std::int64_t total2 = m * (m + 1);  // doubled total rank sum
  const double w_plus = 0.5 * static_cast<double>(w_plus2);

  double p_left, p_right;
  bool exact = false;
  if (m <= kWilcoxonExactLimit) {
    // Distribution of the doubled positive-rank sum over all 2^m sign
    // patterns, accumulated one rank at a time.
    std::vector<std::uint64_t> ways(total2 + 1, 0);
    ways[0] = 1;
    std::int64_t reach = 0;
    for (std::int64_t r : ranks) {
      for (std::int64_t s = reach; s >= 0; --s) {
        if (ways[s] != 0) ways[s + r] += ways[s];
      }
      reach += r;
    }
    std::uint64_t at_most = 0, at_least = 0;
    for (std::int64_t s = 0; s <= total2; ++s) {
      if (s <= w_plus2) at_most += ways[s];
      if (s >= w_plus2) at_least += ways[s];
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(m));
    p_left = static_cast<double>(at_most) / patterns;
    p_right = static_cast<double>(at_least) / patterns;
    exact = true;
  } else {
    const double md = static_cast<double>(m);
    const double mean = md * (md + 1.0) / 4.0;
    double variance = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0;
    for (std::int64_t t : tie_sizes) {
      const double td = static_cast<double>(t);
      variance -= (td * td * td - td) / 48.0;
    }
    const double sd = std::sqrt(variance);
    p_right = dist::NormalSf((w_plus - mean - 0.5) / sd);
    p_left = dist::NormalCdf((w_plus - mean + 0.5) / sd);
  }

  TestResult r;
  r.test = TestKind::kWilcoxonSignedRank;
  r.statistic = w_plus;
  r.p_value = Clamp01(CombineTails(tail, p_left, p_right));
  r.tail = tail;
  r.n = static_cast<std::int64_t>(d.size());
  r.dropped_zeros = r.n - m;
  r.exact = exact;
  // (W+ - W-) / (W+ + W-), computed on doubled sums.
  r.effect_size = static_cast<double>(2 * w_plus2 - total2) /
                  static_cast<double>(total2);

  const MeanSd s = Describe(d);
  double cohen_d;
  if (s.sd > 0.0) {
    cohen_d = s.mean / s.sd;
  } else {
    cohen_d = std::copysign(std::numeric_limits<double>::infinity(), s.mean);
  }
  r.power = PostHocPower(TestKind::kWilcoxonSignedRank, cohen_d,
                         static_cast<double>(r.n), alpha, tail);
  return r;
}

TestResult ChiSquareIndependence(const ContingencyTable& table,
                                 const ChiSquareOptions& options) {
  if (table.rows < 1 || table.cols < 1 ||
      static_cast<int>(table.counts.size()) != table.rows * table.cols) {
    throw StatsError("chi-square: malformed contingency table");
  }
  for (std::int64_t c : table.counts) {
    if (c < 0) throw StatsError("chi-square: negative count");
  }
  const std::int64_t total = table.Total();
  if (total == 0) throw StatsError("chi-square: table is empty");

  std::vector<double> row_sums, col_sums;
  std::vector<int> kept_rows, kept_cols;
  for (int r = 0; r < table.rows; ++r) {
    std::int64_t s = 0;
    for (int c = 0; c < table.cols; ++c) s += table.at(r, c);
    if (s > 0) {
      kept_rows.push_back(r);
      row_sums.push_back(static_cast<double>(s));
    }
  }
  for (int c = 0; c < table.cols; ++c) {
    std::int64_t s = 0;
    for (int r = 0; r < table.rows; ++r) s += table.at(r, c);
    if (s > 0) {
      kept_cols.push_back(c);
      col_sums.push_back(static_cast<double>(s));
    }
  }

  TestResult result;
  result.test = TestKind::kChiSquare;
  result.n = total;
  if (kept_rows.size() < 2 || kept_cols.size() < 2) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    result.degenerate = true;
    result.df = 0.0;
    return result;
  }

  const double n = static_cast<double>(total);
  const bool yates = options.continuity_correction && kept_rows.size() == 2 &&
                     kept_cols.size() == 2;
  double statistic = 0.0;
  for (size_t i = 0; i < kept_rows.size(); ++i) {
    for (size_t j = 0; j < kept_cols.size(); ++j) {
      const double expected = row_sums[i] * col_sums[j] / n;
      double deviation =
          std::fabs(static_cast<double>(table.at(kept_rows[i], kept_cols[j])) -
                    expected);
      if (yates) deviation -= std::min(0.5, deviation);
      statistic += deviation * deviation / expected;
    }
  }
  const double df =
      static_cast<double>((kept_rows.size() - 1) * (kept_cols.size() - 1));
  result.statistic = statistic;
  result.df = df;
  result.p_value = Clamp01(dist::ChiSquareSf(statistic, df));
  result.effect_size = std::sqrt(statistic / n);
  result.power = PostHocPower(TestKind::kChiSquare, result.effect_size, n,
                              options.alpha, Tail::kTwoSided, df);
  return result;
}

double PostHocPower(TestKind test, double effect_size, double n, double alpha,
                    Tail tail, std::optional<double> df) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw StatsError("power: alpha must lie in (0, 1)");
  }
  if (!(n >= 2.0)) throw StatsError("power: n must be at least 2");
  if (std::isnan(effect_size)) throw StatsError("power: effect size is NaN");

  switch (test) {
    case TestKind::kPairedT:
    case TestKind::kWilcoxonSignedRank: {
      // Asymptotic relative efficiency of the signed-rank test vs. t.
      const double n_eff =
          test == TestKind::kWilcoxonSignedRank ? n * 3.0 / M_PI : n;
      const double t_df = n_eff - 1.0;
      if (std::isinf(effect_size)) {
        const bool up = effect_size > 0;
        if (tail == Tail::kTwoSided) return 1.0;
        return (tail == Tail::kRight) == up ? 1.0 : 0.0;
      }
      const double nc = effect_size * std::sqrt(n_eff);
      double power;
      if (tail == Tail::kTwoSided) {
        const double crit = dist::StudentTQuantile(1.0 - alpha / 2.0, t_df);
        power = dist::NoncentralTSf(crit, t_df, nc) +
                dist::NoncentralTCdf(-crit, t_df, nc);
      } else {
        const double crit = dist::StudentTQuantile(1.0 - alpha, t_df);
        power = tail == Tail::kRight ? dist::NoncentralTSf(crit, t_df, nc)
                                     : dist::NoncentralTCdf(-crit, t_df, nc);
      }
      return Clamp01(power);
    }
    case TestKind::kChiSquare: {
      if (!df.has_value() || !(*df > 0.0)) {
        throw StatsError("power: chi-square power needs positive df");
      }
      const double crit = dist::ChiSquareQuantile(1.0 - alpha, *df);
      const double lambda = n * effect_size * effect_size;
      return Clamp01(dist::NoncentralChiSquareSf(crit, *df, lambda));
    }
    case TestKind::kShapiroWilk:
      break;
  }
  throw StatsError("power: unsupported test kind '" +
                   std::string(TestKindName(test)) + "'");
}

}  // namespace bab
