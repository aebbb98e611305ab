#include "disperse/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace disperse {

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DISPERSE_THREADS")) {
    try {
      long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  constexpr std::size_t kMinChunk = 4096;
  const std::size_t workers = std::min<std::size_t>(thread_count(), (n + kMinChunk - 1) / kMinChunk);
  if (workers <= 1) {
    if (n) body(0, n);
    return;
  }
  const std::size_t step = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * step, e = std::min(n, b + step);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
}

}  // namespace disperse
