#include "sbridge/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sbridge {

namespace {

std::atomic<int> g_override{0};

int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : static_cast<int>(n);
}

int env_threads() {
  static const int cached = [] {
    const char* value = std::getenv("SINKHORN_BRIDGE_THREADS");
    if (value == nullptr) return hardware_threads();
    const long parsed = std::strtol(value, nullptr, 10);
    if (parsed < 1) return hardware_threads();
    return static_cast<int>(std::min<long>(parsed, 256));
  }();
  return cached;
}

}  // namespace

int max_threads() {
  const int forced = g_override.load(std::memory_order_relaxed);
  return forced > 0 ? forced : env_threads();
}

void set_max_threads(int n) {
  g_override.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body) {
  if (n <= 0) return;
  const std::ptrdiff_t workers =
      std::min<std::ptrdiff_t>(max_threads(), n);
  if (workers <= 1) {
    body(0, n);
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto guarded = [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    try {
      body(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    const std::ptrdiff_t begin = w * chunk;
    const std::ptrdiff_t end = std::min<std::ptrdiff_t>(begin + chunk, n);
    if (begin >= end) break;
    pool.emplace_back(guarded, begin, end);
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sbridge
