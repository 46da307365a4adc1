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

#include "bab/distributions.h"

#include <cmath>
#include <functional>
#include <limits>

#include "bab/errors.h"

namespace bab::dist {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 20000;
constexpr double kLnSqrt2Pi = 0.91893853320467274178;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double BetaContinuedFraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

double GammaSeries(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double GammaContinuedFraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Safeguarded Newton iteration for cdf(x) = p on a bracket [lo, hi].
double InvertCdf(const std::function<double(double)>& cdf,
                 const std::function<double(double)>& pdf, double p, double lo,
                 double hi, double x) {
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double f = cdf(x) - p;
    if (f == 0.0) return x;
    if (f < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = pdf(x);
    double next = slope > 0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::max(1.0, std::fabs(x))) return next;
    x = next;
  }
  return x;
}

double NonnegativeNoncentralTCdf(double t, double df, double delta) {
  if (delta == 0.0) return StudentTCdf(t, df);
  const double base = NormalCdf(-delta);
  if (t == 0.0) return base;

  const double x = t * t / (t * t + df);
  const double half_df = 0.5 * df;
  const double h = 0.5 * delta * delta;
  const double log_h = std::log(h);
  const double log_half = std::log(0.5);
  const double log_q_scale = std::log(std::fabs(delta) / std::sqrt(2.0));
  const double sign = delta > 0 ? 1.0 : -1.0;

  auto weights = [&](double j, double* p, double* q) {
    const double common = log_half - h + j * log_h;
    *p = std::exp(common - std::lgamma(j + 1.0));
    *q = std::exp(common + log_q_scale - std::lgamma(j + 1.5));
  };

  // Poisson-style mixture summed outward from the peak weight.
  const double mode = std::floor(h);
  double sum = 0.0;
  for (double j = mode; j < mode + kMaxIterations; j += 1.0) {
    double p, q;
    weights(j, &p, &q);
    const double term = p * IncompleteBeta(j + 0.5, half_df, x) +
                        sign * q * IncompleteBeta(j + 1.0, half_df, x);
    sum += term;
    if (j > mode && (p + q < 1e-17 || std::fabs(term) < 1e-18)) break;
  }
  for (double j = mode - 1.0; j >= 0.0; j -= 1.0) {
    double p, q;
    weights(j, &p, &q);
    sum += p * IncompleteBeta(j + 0.5, half_df, x) +
           sign * q * IncompleteBeta(j + 1.0, half_df, x);
    if (p + q < 1e-17) break;
  }
  const double cdf = base + sum;
  return std::min(1.0, std::max(0.0, cdf));
}

template <typename Tail>
double PoissonMixture(double lambda, Tail tail) {
  const double h = 0.5 * lambda;
  const double log_h = std::log(h);
  const double mode = std::floor(h);
  auto weight = [&](double j) {
    return std::exp(-h + j * log_h - std::lgamma(j + 1.0));
  };
  double sum = 0.0;
  for (double j = mode; j < mode + kMaxIterations; j += 1.0) {
    const double w = weight(j);
    sum += w * tail(j);
    if (j > mode && w < 1e-17) break;
  }
  for (double j = mode - 1.0; j >= 0.0; j -= 1.0) {
    const double w = weight(j);
    sum += w * tail(j);
    if (w < 1e-17) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

}  // namespace

double IncompleteBeta(double a, double b, double x) {
  if (!(a > 0 && b > 0)) throw StatsError("IncompleteBeta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double IncompleteGammaP(double a, double x) {
  if (!(a > 0)) throw StatsError("IncompleteGammaP: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return GammaSeries(a, x);
  return 1.0 - GammaContinuedFraction(a, x);
}

double IncompleteGammaQ(double a, double x) {
  if (!(a > 0)) throw StatsError("IncompleteGammaQ: a must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - GammaSeries(a, x);
  return GammaContinuedFraction(a, x);
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double NormalSf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double NormalPdf(double z) { return std::exp(-0.5 * z * z - kLnSqrt2Pi); }

double NormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw StatsError("NormalQuantile: p outside [0, 1]");
  }
  // Rational starting point, then Halley refinement against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = x > 0 ? (1.0 - p) - NormalSf(x) : NormalCdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double StudentTCdf(double t, double df) {
  if (!(df > 0)) throw StatsError("StudentTCdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * IncompleteBeta(0.5 * df, 0.5, x);
  return t > 0 ? 1.0 - tail : tail;
}

double StudentTSf(double t, double df) { return StudentTCdf(-t, df); }

double StudentTPdf(double t, double df) {
  return std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                  0.5 * std::log(df * M_PI) -
                  0.5 * (df + 1.0) * std::log1p(t * t / df));
}

double StudentTQuantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw StatsError("StudentTQuantile: p outside (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -StudentTQuantile(1.0 - p, df);
  double hi = 2.0;
  while (StudentTCdf(hi, df) < p) hi *= 2.0;
  return InvertCdf([df](double t) { return StudentTCdf(t, df); },
                   [df](double t) { return StudentTPdf(t, df); }, p, 0.0, hi,
                   NormalQuantile(p));
}

double ChiSquareCdf(double x, double df) {
  if (!(df > 0)) throw StatsError("ChiSquareCdf: df must be positive");
  return IncompleteGammaP(0.5 * df, 0.5 * x);
}

double ChiSquareSf(double x, double df) {
  if (!(df > 0)) throw StatsError("ChiSquareSf: df must be positive");
  return IncompleteGammaQ(0.5 * df, 0.5 * x);
}

double ChiSquarePdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) -
                  std::lgamma(k));
}

double ChiSquareQuantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw StatsError("ChiSquareQuantile: p outside (0, 1)");
  double hi = std::max(1.0, df);
  while (ChiSquareCdf(hi, df) < p) hi *= 2.0;
  return InvertCdf([df](double x) { return ChiSquareCdf(x, df); },
                   [df](double x) { return ChiSquarePdf(x, df); }, p, 0.0, hi,
                   df);
}

double NoncentralTCdf(double t, double df, double delta) {
  if (!(df > 0)) throw StatsError("NoncentralTCdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (t < 0.0) return 1.0 - NonnegativeNoncentralTCdf(-t, df, -delta);
  return NonnegativeNoncentralTCdf(t, df, delta);
}

double NoncentralTSf(double t, double df, double delta) {
  if (!(df > 0)) throw StatsError("NoncentralTSf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  if (t < 0.0) return NonnegativeNoncentralTCdf(-t, df, -delta);
  return 1.0 - NonnegativeNoncentralTCdf(t, df, delta);
}

double NoncentralChiSquareCdf(double x, double df, double lambda) {
  if (!(df > 0) || lambda < 0) {
    throw StatsError("NoncentralChiSquareCdf: invalid parameters");
  }
  if (lambda == 0.0) return ChiSquareCdf(x, df);
  if (x <= 0.0) return 0.0;
  return PoissonMixture(lambda, [&](double j) {
    return IncompleteGammaP(0.5 * df + j, 0.5 * x);
  });
}

double NoncentralChiSquareSf(double x, double df, double lambda) {
  if (!(df > 0) || lambda < 0) {
    throw StatsError("NoncentralChiSquareSf: invalid parameters");
  }
  if (lambda == 0.0) return ChiSquareSf(x, df);
  if (x <= 0.0) return 1.0;
  return PoissonMixture(lambda, [&](double j) {
    return IncompleteGammaQ(0.5 * df + j, 0.5 * x);
  });
}

}  // namespace bab::dist
