#pragma once

#include <cstddef>
#include <functional>

namespace qalpha {

// Current worker cap (>= 1). Defaults to the hardware concurrency.
int max_threads();

// n <= 0 restores the hardware default.
void set_max_threads(int n);

// Runs fn over contiguous chunks of [0, count). Nested calls execute inline,
// so parallelism applies only at the outermost level. The first exception
// thrown by a worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace qalpha
