#pragma once

#include <cstddef>
#include <functional>

namespace dimlab {

// Worker count: DIMLAB_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t thread_count();

// Runs body(i) for i in [0, n). Iterations must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dimlab
