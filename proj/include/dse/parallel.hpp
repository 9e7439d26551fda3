#pragma once

#include <cstddef>
#include <functional>

namespace dse {

// Worker count: DSE_THREADS when set (clamped to [1, 256]), otherwise the
// hardware concurrency.
int worker_count();

// Runs fn(0..n-1) across workers.  Callers own output placement by index, so
// results never depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dse
