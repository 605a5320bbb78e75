#pragma once

#include <cstddef>
#include <functional>

namespace liouville {

/// Worker count: hardware concurrency, capped by the TOOLKIT_THREADS
/// environment variable when it is set to a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Exceptions from any task are rethrown
/// (the first one wins). Results must not depend on scheduling order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace liouville
