#pragma once

#include "selftrig/predictor.hpp"

namespace selftrig {

struct ScanResult {
    double t_found = 0.0;      // grid-aligned: t_k + i * grid_step
    double grid_step = 0.0;
    long samples_evaluated = 0;
    bool found = false;
};

// Walks Z on a uniform grid from t_k; reports the first grid point where Z
// turned negative after being positive. The true crossing lies within one
// grid_step below t_found. horizon is a duration past t_k; reaching it
// without a sign change reports found = false.
ScanResult dense_event_scan(const PredictionContext& ctx, double grid_step, double horizon);

// Same walk on V; reports the first grid point where the forward difference
// of V flips from negative to positive (a sampled local minimum).
ScanResult dense_min_scan(const PredictionContext& ctx, double grid_step, double horizon);

} // namespace selftrig
