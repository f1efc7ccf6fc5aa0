#pragma once

#include <cstddef>
#include <functional>

namespace toric {

// Global cap on worker threads used by parallel_for.  0 means "use
// std::thread::hardware_concurrency()".  Set once at startup (e.g. from a
// --threads flag); not synchronized against concurrent parallel_for calls.
void set_max_threads(int k);
int max_threads();

// Runs body(i) for i in [0, count).  Work items must be independent; results
// should be written to per-index slots so that any later reduction can be
// done in index order, keeping outputs identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace toric
