#ifndef UCNORM_PARALLEL_HPP
#define UCNORM_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ucnorm {

/// Worker cap: UCNORM_THREADS when set (>= 1), otherwise 1.  Results of the
/// loops below do not depend on the thread count; the env var only trades
/// wall time.
inline int max_threads() {
  if (const char* env = std::getenv("UCNORM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

/// max over i in [0, count) of fn(i); fn must be safe to call concurrently
/// (each index gets its own derived RNG stream upstream).
inline double parallel_max(long count, const std::function<double(long)>& fn) {
  const int threads = std::min<long>(max_threads(), std::max<long>(1, count));
  if (threads <= 1) {
    double best = -1.0;
    for (long i = 0; i < count; ++i) best = std::max(best, fn(i));
    return best;
  }
  std::vector<double> partial(static_cast<std::size_t>(threads), -1.0);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      double best = -1.0;
      for (long i = t; i < count; i += threads) best = std::max(best, fn(i));
      partial[static_cast<std::size_t>(t)] = best;
    });
  }
  for (auto& th : pool) th.join();
  double best = -1.0;
  for (double v : partial) best = std::max(best, v);
  return best;
}

}  // namespace ucnorm

#endif  // UCNORM_PARALLEL_HPP
