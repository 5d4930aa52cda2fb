/*
 * Copyright 2026 The KCF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KCF_RANDOM_H_
#define KCF_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace kcf {

// std::uniform_int_distribution and std::shuffle are implementation defined;
// these helpers only rely on the mt19937_64 output sequence, which the
// standard pins down, so fold plans replay identically across toolchains.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound). bound must be positive.
inline std::uint64_t UniformBelow(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % bound) - 1;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw > limit);
  return draw % bound;
}

template <typename T>
void Shuffle(Rng& rng, std::span<T> values) {
  for (std::size_t k = values.size(); k > 1; --k) {
    const std::size_t j = UniformBelow(rng, k);
    std::swap(values[k - 1], values[j]);
  }
}

}  // namespace kcf

#endif  // KCF_RANDOM_H_
