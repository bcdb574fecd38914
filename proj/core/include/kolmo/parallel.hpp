#pragma once

#include <cstddef>
#include <functional>

namespace kolmo {

// Resolves a worker count: a positive request wins, then the KOLMO_WORKERS
// environment variable, then std::thread::hardware_concurrency().
int resolve_workers(int requested = 0);

// Runs body(begin, end) over a static partition of [0, n). Chunk boundaries
// depend on n and grain only, so results written by index are independent of
// the number of workers.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 64);

}  // namespace kolmo
