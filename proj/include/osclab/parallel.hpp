#pragma once

#include <cstddef>
#include <functional>

namespace osclab {

/// Worker count: the override set by set_thread_limit, else OSC_LAB_THREADS,
/// else the hardware concurrency.
unsigned thread_count();

/// Caps parallelism for this process; 0 restores the default.
void set_thread_limit(unsigned limit);

/// Calls body(i) for every i in [0, n), possibly concurrently. Bodies must
/// write only to per-index storage; reductions happen afterwards in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace osclab
