#include "tvtomo/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tvtomo {

std::size_t thread_count() {
  static const std::size_t count = [] {
    const char* env = std::getenv("TVTOMO_NUM_THREADS");
    if (env == nullptr) return std::size_t{1};
    try {
      const long long v = std::stoll(env);
      if (v < 1) return std::size_t{1};
      return static_cast<std::size_t>(v);
    } catch (...) {
      return std::size_t{1};
    }
  }();
  return count;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers = std::min(thread_count(), n == 0 ? std::size_t{1} : n);
  if (workers <= 1 || n == 0) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tvtomo
