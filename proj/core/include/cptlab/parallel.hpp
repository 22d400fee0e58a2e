#pragma once

#include <cstddef>
#include <functional>

namespace cptlab {

/// Number of workers used by parallel_for: CPT_LAB_THREADS when set, else the
/// hardware concurrency (at least 1). set_worker_count overrides both.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Results
/// must be written to per-index slots; the first exception by index order is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cptlab
