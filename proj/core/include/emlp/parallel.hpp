#pragma once

#include <cstddef>
#include <functional>

namespace emlp {

/// Run f(0..n-1) on up to `threads` worker threads (0 = hardware count).
/// Exceptions from workers are collected and the first one is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f);

int hardware_threads();

} // namespace emlp
