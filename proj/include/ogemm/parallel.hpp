#pragma once

#include <cstddef>
#include <functional>

namespace ogemm {

// Worker count: OGEMM_THREADS env override, else hardware concurrency.
unsigned worker_count();

// Runs body(begin, end) over a static partition of [0, n). Each index is
// processed by exactly one invocation, so writes to per-index slots are
// race-free and results do not depend on the thread count. Nested calls
// run inline on the calling thread.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& body);

}  // namespace ogemm
