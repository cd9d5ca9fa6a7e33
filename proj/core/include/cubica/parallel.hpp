#pragma once

#include <cstddef>
#include <functional>

namespace cubica {

/// Worker count: CUBICA_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end, worker_index). Chunk boundaries depend only on n and the
/// worker count, so reductions indexed by worker_index are deterministic.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

} // namespace cubica
