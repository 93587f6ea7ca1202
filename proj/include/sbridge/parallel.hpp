#pragma once

#include <cstddef>
#include <functional>

namespace sbridge {

// Worker-thread budget for parallel_for. The SINKHORN_BRIDGE_THREADS
// environment variable caps it; set_max_threads overrides both (passing
// n <= 0 restores the environment/default value).
int max_threads();
void set_max_threads(int n);

// Runs body(begin, end) over contiguous ranges covering [0, n). Bodies must
// only write per-index slots; reductions belong to the caller, performed
// serially in index order, so results are identical at every thread count.
// The first exception thrown inside a body is rethrown here.
void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body);

}  // namespace sbridge
