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

#ifndef BAB_RNG_H_
#define BAB_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

// Portable, stateless-seedable randomness. Every stream is derived from a
// user seed plus a tuple of labels, so results never depend on call order
// or on the standard library's distribution implementations.

namespace bab::rng {

// SplitMix64 output function.
std::uint64_t Mix64(std::uint64_t x);

// 64-bit FNV-1a over the bytes of `s`, finalized with Mix64.
std::uint64_t HashString(std::string_view s);

// Folds `parts` into `seed` one element at a time.
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> parts);

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

 private:
  std::uint64_t state_;
};

// k distinct indices from [0, n), in ascending order.
std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k,
                                       Stream& stream);

// Uniform permutation of [0, n).
std::vector<std::size_t> Permutation(std::size_t n, Stream& stream);

// Standard normal variate computed from a 64-bit key (Box-Muller on two
// uniforms derived from the key).
double GaussianFromKey(std::uint64_t key);

}  // namespace bab::rng

#endif  // BAB_RNG_H_
