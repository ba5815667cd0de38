#pragma once

#include <cstddef>
#include <functional>

namespace foldylax {

// Worker count used by the parallel kernels. Initialized from FOLDY_THREADS
// when set, otherwise 1. Values < 1 are clamped to 1.
int thread_count();
void set_thread_count(int n);

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// visited by exactly one worker; callers write per-index results, so the
// outcome does not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace foldylax
