#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace powerdist {

namespace detail {
inline unsigned& thread_cap_storage() {
  static unsigned cap = [] {
    if (const char* env = std::getenv("POWERDIST_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
    }
    return 0u;  // 0 = auto
  }();
  return cap;
}
}  // namespace detail

/// Worker cap for triple scans; 0 means hardware auto. Initialized from the
/// POWERDIST_THREADS environment variable.
inline unsigned thread_cap() { return detail::thread_cap_storage(); }
inline void set_thread_cap(unsigned cap) { detail::thread_cap_storage() = cap; }

inline unsigned effective_workers(std::size_t range) {
  unsigned cap = thread_cap();
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = cap == 0 ? hw : std::min(cap, hw);
  if (workers > range) workers = static_cast<unsigned>(range);
  return workers == 0 ? 1 : workers;
}

/// Partitions [0, range) across workers by striding (worker w handles
/// indices w, w + W, w + 2W, ...), which balances triangle-shaped loops,
/// then merges the slots sequentially in worker order. Callers must make
/// the merged result independent of the partitioning (reduce with a total
/// order), so results are identical to a sequential run.
template <typename Slot>
void parallel_chunks(std::size_t range, std::size_t min_parallel_range,
                     const std::function<void(std::size_t, std::size_t, Slot&)>& work,
                     const std::function<void(const Slot&)>& merge) {
  const unsigned workers = effective_workers(range);
  if (workers <= 1 || range < min_parallel_range) {
    Slot slot{};
    work(0, 1, slot);
    merge(slot);
    return;
  }
  std::vector<Slot> slots(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    threads.emplace_back([&, w] { work(w, workers, slots[w]); });
  for (auto& t : threads) t.join();
  for (const auto& slot : slots) merge(slot);
}

}  // namespace powerdist
