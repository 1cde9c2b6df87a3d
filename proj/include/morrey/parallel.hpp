// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace morrey {

/// Worker count from MORREY_THREADS (unset or 0 = hardware concurrency).
inline unsigned thread_count() {
  unsigned requested = 0;
  if (const char* env = std::getenv("MORREY_THREADS")) {
    try {
      requested = static_cast<unsigned>(std::max(0L, std::stol(env)));
    } catch (...) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// Runs fn(i) for i in [0, count). Each index is handled by exactly one
/// worker, so callers that write only to slot i get results independent of
/// the thread count.
template <typename Fn>
void parallel_for(long count, Fn&& fn) {
  if (count <= 0) return;
  const long workers = std::min<long>(thread_count(), count);
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, workers, count] {
      for (long i = w; i < count; i += workers) fn(i);
    });
  }
}

}  // namespace morrey
