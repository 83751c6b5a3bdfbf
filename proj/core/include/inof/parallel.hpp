#pragma once

#include <cstddef>
#include <functional>

namespace inof {

// Worker count used when a caller passes 0: INOF_THREADS env var if set,
// otherwise std::thread::hardware_concurrency().
std::size_t default_thread_count();

// Applies body(chunk_index, begin, end) over [0, n) split into fixed-size
// chunks, distributed over up to n_threads workers. Chunk boundaries depend
// only on n and chunk_size, never on the worker count, so per-chunk partial
// results can be folded in chunk order to get reductions that are bit-equal
// for any thread count.
void for_each_chunk(std::size_t n, std::size_t chunk_size, std::size_t n_threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace inof
