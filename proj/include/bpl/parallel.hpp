#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bpl {

/// Runs fn(r) for every replica index r in [0, count) on `threads` workers.
/// Replicas are claimed from an atomic counter, so the schedule is
/// arbitrary; callers must write results into pre-sized per-replica slots
/// and reduce in index order afterwards, which keeps every aggregate
/// independent of the thread count.
template <class Fn>
void parallel_replicas(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      std::size_t r = next.fetch_add(1);
      if (r >= count || failed.load()) return;
      try {
        fn(r);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace bpl
