#pragma once

#include <cstddef>
#include <functional>

namespace frailty {

/// Worker count: FRAILTY_SHAPES_THREADS if set to a positive integer,
/// otherwise the hardware concurrency.
std::size_t worker_count();

/// Calls body(begin, end) on disjoint chunks covering [0, n). Results must
/// be written by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace frailty
