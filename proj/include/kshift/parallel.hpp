#pragma once

#include <thread>
#include <vector>

namespace kshift {

// Deterministic chunked parallel loop: f(i) must write only to slots owned by
// index i, so results are independent of the worker count.
template <class F>
void parallel_for(long lo, long hi, int threads, F&& f) {
  const long n = hi - lo;
  if (n <= 0) return;
  if (threads <= 1 || n < 64) {
    for (long i = lo; i < hi; ++i) f(i);
    return;
  }
  const int k = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(k);
  const long chunk = (n + k - 1) / k;
  for (int t = 0; t < k; ++t) {
    const long a = lo + t * chunk;
    const long b = std::min(hi, a + chunk);
    if (a >= b) break;
    pool.emplace_back([a, b, &f] {
      for (long i = a; i < b; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace kshift
