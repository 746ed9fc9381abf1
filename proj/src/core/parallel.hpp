#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hsssi {

inline unsigned worker_count() {
  if (const char* env = std::getenv("HSSSI_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

/// Runs fn(i) for i in [0, n). Each index is processed exactly once; callers
/// write results into index-addressed slots, so the outcome is independent of
/// the worker count and of scheduling.
template <typename Fn>
void parallel_for_indexed(std::size_t n, Fn&& fn, unsigned workers = 0) {
  if (workers == 0) workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

/// Pairwise (cascade) summation: bit-stable for a fixed element order and
/// more accurate than left-to-right accumulation on long vectors.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

}  // namespace hsssi
