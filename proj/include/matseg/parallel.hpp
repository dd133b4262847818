#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace matseg {

/// Worker count: `requested` if set, else $MATSEG_THREADS, else the hardware
/// concurrency. Always >= 1.
int resolve_threads(std::optional<int> requested = std::nullopt);

/// Calls task(i) for i in [0, count) on up to `threads` workers. Tasks must
/// write only to their own slot; the first exception is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

}  // namespace matseg
