#pragma once

#include <cstddef>
#include <functional>

namespace rboost {

/// Caps the worker threads used by parallel_for. 0 restores the default
/// (hardware concurrency).
void set_max_threads(std::size_t threads);
std::size_t max_threads();

/// Runs body(chunk_begin, chunk_end, chunk_index) over [begin, end) split into
/// contiguous chunks. Chunk boundaries depend only on the range and
/// `num_chunks`, never on scheduling, so callers can reduce per-chunk results
/// in chunk order and stay deterministic.
void parallel_for(std::size_t begin, std::size_t end, std::size_t num_chunks,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace rboost
