#pragma once

#include <cstddef>
#include <functional>

namespace squeezelab {

/// Worker count: `requested` if positive, else SQUEEZELAB_THREADS, else the
/// hardware concurrency.
int resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, n) over `threads` workers with static chunks.
/// Results must be written to per-index slots; no ordering is implied.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace squeezelab
