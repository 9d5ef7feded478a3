#pragma once

#include <cstddef>
#include <functional>

namespace fractalhand {

// Worker count to use when the caller passes 0: std::thread::hardware_concurrency(), min 1.
int default_workers();

// Calls body(i) for every i in [0, count) on up to `workers` threads (0 selects
// default_workers()). Indices are handed out dynamically; body must only write state
// owned by index i. The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace fractalhand
