#pragma once

#include <cstddef>
#include <functional>

namespace efimov {

// Number of worker threads: min(hardware_concurrency, EFIMOV_THREADS if set).
// Always >= 1.
std::size_t thread_budget();

// Runs fn(i) for i in [0, count). Work is split into contiguous chunks, one
// per worker. fn must only write to disjoint, preallocated slots (index i);
// reductions over the results happen afterwards in fixed index order, so the
// outcome is independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace efimov
