#pragma once

#include <cstddef>
#include <functional>

namespace harmomorph {

/// Worker cap: HARMOMORPH_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Calls
/// made from inside a worker run serially. The first exception thrown by any
/// body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace harmomorph
