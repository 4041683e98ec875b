#pragma once

// Thin OpenMP wrapper: every data-parallel loop in the library (crossing-scan
// grids, verification trial batches) is expressed as parallel_for over an
// index range with per-index writes, so the serial and parallel paths produce
// identical results and can be compared in tests and benchmarks.

#include <cstddef>
#include <functional>

namespace interlace {

/// Runs fn(i) for i in [0, n). With parallel = true and OpenMP compiled in,
/// iterations are distributed across threads; exceptions thrown by fn are
/// captured and the first one is rethrown after the loop completes. The
/// serial path (parallel = false) is the reference implementation.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  bool parallel = true);

bool openmp_enabled();
int max_threads();

}  // namespace interlace
