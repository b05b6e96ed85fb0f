#pragma once

#include <cstddef>
#include <functional>

namespace ibm {

/// Worker count: `requested` (0 = hardware concurrency), capped by IBM_THREADS.
int resolve_workers(int requested = 0);

/// Calls fn(i) for i in [0, n) on up to `workers` threads.
///
/// Each index is processed exactly once; callers write results into slot i,
/// so outputs never depend on the worker count. The first exception thrown
/// (lowest index) is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int workers = 0);

}  // namespace ibm
