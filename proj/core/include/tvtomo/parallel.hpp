#pragma once

#include <cstddef>
#include <functional>

namespace tvtomo {

// Worker count taken from TVTOMO_NUM_THREADS (default 1), read once.
std::size_t thread_count();

// Runs fn(begin, end) on contiguous chunks of [0, n) across thread_count()
// workers. Only used where each index writes its own outputs, so results are
// identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace tvtomo
