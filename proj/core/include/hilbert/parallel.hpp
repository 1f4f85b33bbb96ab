#ifndef HILBERT_PARALLEL_HPP
#define HILBERT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hilbert {

/// Worker count: min(hardware, HILBERT_THREADS) with HILBERT_THREADS >= 1.
int worker_count();

/// Runs fn(i) for i in [0, n). Work is split into fixed contiguous chunks so
/// results written to per-index slots are identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace hilbert

#endif
