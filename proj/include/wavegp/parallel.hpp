#pragma once

#include <cstddef>
#include <functional>

namespace wavegp {

// Worker cap used by every parallel loop. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Indices are split into contiguous blocks, so
// results never depend on the number of workers as long as body(i) only
// writes to slots owned by i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wavegp
