/*
 * Copyright (c) 2026, The cvflab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CVFLAB_SRC_PARALLEL_HPP_
#define CVFLAB_SRC_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cvflab::detail {

inline constexpr std::uint64_t kChunkSize = 4096;

inline std::uint64_t chunk_count(std::uint64_t count,
                                 std::uint64_t chunk_size = kChunkSize) {
  return (count + chunk_size - 1) / chunk_size;
}

// Calls fn(chunk, begin, end) for every fixed-size chunk of [0, count).
// Chunk boundaries do not depend on `workers`, so per-chunk partial results
// combined in chunk order are identical for any worker count.
template <class Fn>
void for_each_chunk(std::uint64_t count, unsigned workers, Fn&& fn,
                    std::uint64_t chunk_size = kChunkSize) {
  const std::uint64_t chunks = chunk_count(count, chunk_size);
  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t begin = c * chunk_size;
    fn(c, begin, std::min(count, begin + chunk_size));
  };
  workers = std::max(1u, workers);
  if (workers == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  const auto threads = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, chunks));
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = chunks;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace cvflab::detail

#endif  // CVFLAB_SRC_PARALLEL_HPP_
