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

#ifndef BAB_DISTRIBUTIONS_H_
#define BAB_DISTRIBUTIONS_H_

// Special functions and the handful of continuous distributions the tests
// need. Everything is double precision; the target accuracy is about 1e-12
// absolute for CDFs in the ranges exercised by the audit pipeline.

namespace bab::dist {

// Regularized incomplete beta I_x(a, b).
double IncompleteBeta(double a, double b, double x);

// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double IncompleteGammaP(double a, double x);
double IncompleteGammaQ(double a, double x);

double NormalCdf(double z);
double NormalSf(double z);
double NormalPdf(double z);
// Inverse of NormalCdf. p must lie in (0, 1).
double NormalQuantile(double p);

// Student t with real-valued degrees of freedom df > 0.
double StudentTCdf(double t, double df);
double StudentTSf(double t, double df);
double StudentTPdf(double t, double df);
double StudentTQuantile(double p, double df);

double ChiSquareCdf(double x, double df);
double ChiSquareSf(double x, double df);
double ChiSquarePdf(double x, double df);
double ChiSquareQuantile(double p, double df);

// Noncentral t, noncentrality delta (any sign).
double NoncentralTCdf(double t, double df, double delta);
double NoncentralTSf(double t, double df, double delta);

// Noncentral chi-square, noncentrality lambda >= 0.
double NoncentralChiSquareCdf(double x, double df, double lambda);
double NoncentralChiSquareSf(double x, double df, double lambda);

}  // namespace bab::dist

#endif  // BAB_DISTRIBUTIONS_H_
