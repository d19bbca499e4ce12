#pragma once

#include <cstddef>
#include <functional>

namespace air {

/// Worker count: hardware concurrency, capped by the AIR_SIM_THREADS
/// environment variable when it holds a positive integer.
std::size_t worker_count();

/// Runs body(row) for every row in [0, rows). Rows are split into contiguous
/// disjoint blocks, one per worker, so writes indexed by row never overlap.
void parallel_rows(int rows, const std::function<void(int)>& body);

}  // namespace air
