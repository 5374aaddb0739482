#include "pdwg/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pdwg {

int worker_count() {
  const char* env = std::getenv("PDWG_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || n <= 1) return 1;
  return static_cast<int>(n);
}

void parallel_for(int begin, int end, const std::function<void(int)>& body) {
  const int n = end - begin;
  if (n <= 0) return;
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &body]() {
      // contiguous stripes; stripe bounds depend only on n and workers
      const int lo = begin + static_cast<int>(static_cast<long>(n) * w / workers);
      const int hi = begin + static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace pdwg
