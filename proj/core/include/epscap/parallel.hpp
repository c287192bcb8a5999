#pragma once

#include <cstddef>
#include <functional>

namespace epscap {

/// Number of worker threads actually used for a request: `requested`
/// capped by hardware concurrency and by the EPSCAP_THREADS environment
/// variable; requested <= 0 means "auto".
int effective_threads(int requested);

/// Runs fn(i) for i in [0, count) across up to `threads` workers. Each index
/// owns its output slot, so results are deterministic regardless of the
/// schedule. threads <= 1 runs inline.
void parallel_for_index(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace epscap
