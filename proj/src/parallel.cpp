#include "calf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace calf {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CALFROCKET_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) return static_cast<int>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::size_t chunk_count(std::size_t n, int workers) {
  if (n == 0) return 0;
  const std::size_t w = workers > 0 ? static_cast<std::size_t>(workers) : 1;
  return std::min(n, w);
}

void parallel_chunks(std::size_t n, int workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t chunks = chunk_count(n, workers);
  if (chunks == 0) return;

  // Chunk boundaries are a function of (n, chunks) only: the first n % chunks
  // chunks get one extra item.
  const std::size_t base = n / chunks;
  const std::size_t extra = n % chunks;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(chunks);
  std::size_t begin = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }

  if (chunks == 1) {
    fn(0, ranges[0].first, ranges[0].second);
    return;
  }

  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    threads.emplace_back([&, c] {
      try {
        fn(c, ranges[c].first, ranges[c].second);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace calf
