#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dasp {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Tasks are claimed
/// from a shared counter; each task must write only its own outputs.
/// The first exception thrown by any task is rethrown after the join.
template <class Fn>
void parallel_for(long n, int jobs, Fn&& fn) {
  const long workers = std::clamp<long>(jobs, 1, std::max<long>(n, 1));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (long i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (long w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dasp
