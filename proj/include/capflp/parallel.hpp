#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace capflp {

// CAPFLP_THREADS caps internal parallelism; defaults to the hardware count.
inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned budget = hw == 0 ? 1 : hw;
  if (const char* env = std::getenv("CAPFLP_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) budget = static_cast<unsigned>(v);
    } catch (...) {
      // ignore malformed values, keep the default
    }
  }
  return budget;
}

// Runs fn(i) for i in [0, count) over contiguous chunks. Results must be
// written to index-addressed storage; the chunking is then invisible and
// output is identical for any thread count.
template <class Fn>
void parallel_for(std::size_t count, Fn fn) {
  unsigned threads = thread_budget();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace capflp
