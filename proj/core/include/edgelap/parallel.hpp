#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace edgelap {

// Worker count: EDGELAP_THREADS if set and positive, else hardware concurrency.
inline unsigned default_parallelism() {
  if (const char* env = std::getenv("EDGELAP_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

void set_parallelism(unsigned degree);
unsigned parallelism();

// Runs fn(i) for i in [0, n). Each index is handled exactly once; callers write
// results into slot i so output never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned degree = 0) {
  if (degree == 0) degree = parallelism();
  degree = static_cast<unsigned>(std::min<std::size_t>(degree, n));
  if (degree <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_index = n;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(degree);
  for (unsigned t = 0; t < degree; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace edgelap
