#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ropekit {

// Worker count: ROPEKIT_THREADS if set (clamped to >= 1), otherwise the
// hardware concurrency.
unsigned max_threads();

// Splits [0, n) into fixed-size blocks and runs fn(block_index, begin, end)
// on a small pool. The block decomposition does not depend on the thread
// count, so callers that merge per-block results in block order stay
// deterministic under any ROPEKIT_THREADS.
void parallel_blocks(std::size_t n, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace ropekit
