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

#include <benchmark/benchmark.h>

#include <vector>

#include "bab/distributions.h"
#include "bab/rng.h"
#include "bab/stats.h"

namespace bab {
namespace {

std::vector<double> Sample(std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng::GaussianFromKey(rng::DeriveSeed(seed, {i}));
  return out;
}

void BM_WilcoxonExact(benchmark::State& state) {
  const auto x = Sample(state.range(0), 1);
  const std::vector<double> y(x.size(), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(WilcoxonSignedRank(x, y, Tail::kTwoSided, 0.01));
  }
}
BENCHMARK(BM_WilcoxonExact)->Arg(10)->Arg(20);

void BM_WilcoxonApprox(benchmark::State& state) {
  const auto x = Sample(state.range(0), 2);
  const std::vector<double> y(x.size(), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(WilcoxonSignedRank(x, y, Tail::kTwoSided, 0.01));
  }
}
BENCHMARK(BM_WilcoxonApprox)->Arg(200)->Arg(2000);

void BM_ShapiroWilk(benchmark::State& state) {
  const auto x = Sample(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(ShapiroWilk(x));
}
BENCHMARK(BM_ShapiroWilk)->Arg(50)->Arg(1000)->Arg(5000);

void BM_NoncentralTCdf(benchmark::State& state) {
  const double delta = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dist::NoncentralTCdf(2.6, 199.0, delta));
}
BENCHMARK(BM_NoncentralTCdf)->Arg(1)->Arg(5)->Arg(20);

void BM_PairedTPower(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        PostHocPower(TestKind::kPairedT, 0.35, 200, 0.01, Tail::kTwoSided));
  }
}
BENCHMARK(BM_PairedTPower);

}  // namespace
}  // namespace bab
