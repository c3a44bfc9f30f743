//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_UTIL_PARALLEL_H_
#define MSBENCH_UTIL_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace msbench::util {

/// Calls fn(i) for i in [0, n) on up to `workers` threads (the caller's
/// thread included), handing out indices in increasing order. The first
/// exception stops the hand-out and is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn &&fn) {
  std::atomic<std::size_t> next { 0 };
  std::mutex error_mutex;
  std::exception_ptr error;
  auto run = [&] {
    while (true) {
      const std::size_t i = next++;
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next = n;
        return;
      }
    }
  };
  const std::size_t count = std::min(static_cast<std::size_t>(std::max(workers, 1)), n);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < count; ++w)
    pool.emplace_back(run);
  if (count > 0)
    run();
  for (std::thread &t: pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

/// std::thread::hardware_concurrency(), at least 1.
inline int hardware_threads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

} // namespace msbench::util

#endif // MSBENCH_UTIL_PARALLEL_H_
