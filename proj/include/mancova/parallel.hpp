#ifndef MANCOVA_PARALLEL_HPP
#define MANCOVA_PARALLEL_HPP

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace mancova {

// Resolves a requested thread count: 0 means "use MANCOVA_THREADS if set,
// else hardware concurrency". Always at least 1.
inline int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MANCOVA_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs f(begin, end) on contiguous index ranges partitioned statically over
// the given number of threads. Workers share no mutable state; callers write
// results into preallocated slots indexed by iteration, so the outcome does
// not depend on the thread count.
template <class F>
void parallel_ranges(std::int64_t n, int threads, F&& f) {
  threads = thread_count(threads);
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    f(std::int64_t{0}, n);
    return;
  }
  if (threads > n) threads = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::int64_t chunk = n / threads;
  std::int64_t extra = n % threads;
  std::int64_t begin = 0;
  for (int t = 0; t < threads; ++t) {
    std::int64_t len = chunk + (t < extra ? 1 : 0);
    std::int64_t end = begin + len;
    pool.emplace_back([&f, &first_error, &error_mutex, begin, end] {
      try {
        f(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mancova

#endif  // MANCOVA_PARALLEL_HPP
