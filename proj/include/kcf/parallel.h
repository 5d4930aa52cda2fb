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

#ifndef KCF_PARALLEL_H_
#define KCF_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace kcf {

// Runs fn(worker, k) for k in [0, count) on up to `threads` workers pulling
// indices from a shared counter. Worker ids are dense in [0, threads).
template <typename Fn>
void ParallelFor(std::int32_t count, int threads, Fn&& fn) {
  threads = std::max(1, std::min<int>(threads, count));
  if (threads == 1) {
    for (std::int32_t k = 0; k < count; ++k) fn(0, k);
    return;
  }
  std::atomic<std::int32_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::int32_t k = next++; k < count; k = next++) fn(t, k);
    });
  }
  for (auto& worker : pool) worker.join();
}

}  // namespace kcf

#endif  // KCF_PARALLEL_H_
