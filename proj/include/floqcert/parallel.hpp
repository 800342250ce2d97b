#pragma once

#include <functional>

namespace floqcert {

/// requested > 0 wins, then FLOQCERT_WORKERS, then hardware concurrency.
int worker_count(int requested = 0);

/// Runs body(i) for i in [0, n) over a fixed pool; rethrows the first exception after joining.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

}  // namespace floqcert
