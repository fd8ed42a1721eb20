#pragma once

#include <cstddef>
#include <functional>

namespace singlet {

// Process-wide worker count used by parallel_for. 0 = hardware concurrency.
void set_parallelism(unsigned jobs);
unsigned parallelism();

// Runs fn(i) for i in [0, n). Work is split into static chunks; fn must only
// write to index-addressed storage, so results are identical for any worker
// count. Reductions over the results happen sequentially at the call site.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace singlet
