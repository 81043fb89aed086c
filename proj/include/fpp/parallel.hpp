#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace fpp {

// Runs fn(replicate_index) for every index in [0, count) on a worker pool.
// Work is handed out through a shared atomic counter, so the set of indices a
// given worker executes depends on scheduling -- fn must write only to
// per-replicate slots and draw randomness only from streams derived from the
// replicate index, which keeps results identical for any worker count.
// workers = 0 selects hardware_concurrency().
template <class Fn>
void parallel_replicates(std::uint64_t count, std::uint32_t workers, Fn fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || count <= 1) {
    for (std::uint64_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1);
      if (r >= count) return;
      fn(r);
    }
  };
  std::vector<std::thread> pool;
  const auto spawned = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(workers, count));
  pool.reserve(spawned);
  for (std::uint32_t i = 0; i < spawned; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace fpp
