#include "selftrig/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace selftrig {

namespace {

void check_args(double grid_step, double horizon) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("dense scan: grid_step must be positive");
    if (!(horizon > grid_step))
        throw std::invalid_argument("dense scan: horizon must exceed one grid step");
}

} // namespace

ScanResult dense_event_scan(const PredictionContext& ctx, double grid_step, double horizon) {
    check_args(grid_step, horizon);
    ScanResult res;
    res.grid_step = grid_step;

    // incremental stepping: one matrix-vector product per sample
    const Matrix Phi = transition(ctx.dyn, grid_step);
    Vector xi = ctx.event_state.xi;
    const long steps = static_cast<long>(std::floor(horizon / grid_step));
    double z_prev = std::numeric_limits<double>::quiet_NaN();
    for (long i = 1; i <= steps; ++i) {
        xi = Phi * xi;
        ++res.samples_evaluated;
        const double t = ctx.seg.t_k + static_cast<double>(i) * grid_step;
        const AugmentedState s{t, xi};
        const double z = ctx.seg.value(t) - evaluate_plf(ctx.cert, ctx.derivs, s).V;
        if (!std::isnan(z_prev) && z_prev > 0.0 && z < 0.0) {
            res.t_found = t;
            res.found = true;
            return res;
        }
        z_prev = z;
    }
    return res; // horizon exhausted, found stays false
}

ScanResult dense_min_scan(const PredictionContext& ctx, double grid_step, double horizon) {
    check_args(grid_step, horizon);
    ScanResult res;
    res.grid_step = grid_step;

    const Matrix Phi = transition(ctx.dyn, grid_step);
    Vector xi = ctx.event_state.xi;
    double v_prev = evaluate_plf(ctx.cert, ctx.derivs, ctx.event_state).V;
    double diff_prev = std::numeric_limits<double>::quiet_NaN();
    const long steps = static_cast<long>(std::floor(horizon / grid_step));
    for (long i = 1; i <= steps; ++i) {
        xi = Phi * xi;
        ++res.samples_evaluated;
        const double t = ctx.seg.t_k + static_cast<double>(i) * grid_step;
        const AugmentedState s{t, xi};
        const double v = evaluate_plf(ctx.cert, ctx.derivs, s).V;
        const double diff = v - v_prev; // forward difference at the previous grid point
        if (!std::isnan(diff_prev) && diff_prev < 0.0 && diff > 0.0) {
            res.t_found = t - grid_step; // the sampled minimum sits one step back
            res.found = true;
            return res;
        }
        diff_prev = diff;
        v_prev = v;
    }
    return res;
}

} // namespace selftrig
