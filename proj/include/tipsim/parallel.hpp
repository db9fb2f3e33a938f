#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tipsim {

// Paths are processed in fixed-size blocks so that per-block partial results
// can be merged in block order afterwards; the block layout does not depend
// on the worker count, which keeps reductions bit-identical for any number
// of threads.
inline constexpr std::uint64_t kPathBlock = 1024;

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// fn(block_index, first_item, last_item) over [0, n_items) in kPathBlock
// chunks. Blocks are claimed from an atomic counter; fn must only touch the
// slot belonging to its block_index.
template <class BlockFn>
void for_each_block(std::uint64_t n_items, unsigned threads, BlockFn&& fn) {
  const std::uint64_t n_blocks = (n_items + kPathBlock - 1) / kPathBlock;
  unsigned n_workers = resolve_threads(threads);
  if (n_workers > n_blocks) n_workers = static_cast<unsigned>(n_blocks);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    try {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= n_blocks) return;
        const std::uint64_t first = b * kPathBlock;
        const std::uint64_t last = std::min(first + kPathBlock, n_items);
        fn(b, first, last);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

// Streaming mean/variance accumulator (Welford update, Chan merge).
struct RunningMoments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningMoments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double d = other.mean - mean;
    const double nt = na + nb;
    mean += d * nb / nt;
    m2 += other.m2 + d * d * na * nb / nt;
    n += other.n;
  }

  // Sample (n-1) variance; 0 for fewer than two observations.
  double sample_variance() const {
    return n < 2 ? 0.0 : m2 / static_cast<double>(n - 1);
  }
};

}  // namespace tipsim
