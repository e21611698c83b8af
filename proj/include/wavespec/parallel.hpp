#pragma once

#include <cstddef>
#include <functional>

namespace wavespec {

/// Maximum worker threads used by parallel_for when `threads <= 0`.
/// Defaults to the hardware concurrency; settable once from the CLI.
int default_threads();
void set_default_threads(int n);

/// Static partition of [0, n) over worker threads. Each index is processed
/// exactly once; callers must only write to index-owned state, which keeps
/// results identical to a sequential run.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

} // namespace wavespec
