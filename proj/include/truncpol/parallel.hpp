#pragma once

#include <cstddef>
#include <functional>

namespace truncpol {

/// Worker count: TRUNCPOL_THREADS if set, else hardware concurrency.
int worker_count();

/// Calls fn(i) for i in [0, n) across worker_count() threads. Work is
/// statically partitioned; callers write results by index.
void parallel_for(std::size_t n, std::function<void(std::size_t)> const& fn);

}  // namespace truncpol
