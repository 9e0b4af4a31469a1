#pragma once

#include <functional>

namespace slgate {

// Worker count: SLGATE_WORKERS environment variable if set (clamped to >= 1),
// otherwise std::thread::hardware_concurrency().
int worker_count();

// Runs fn(0..n-1) across worker_count() threads (work-stealing counter).
// Deterministic output is the caller's responsibility: write to disjoint
// slots. Rethrows the first exception raised by any worker.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace slgate
