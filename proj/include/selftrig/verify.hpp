#pragma once

#include "selftrig/config.hpp"
#include "selftrig/oracle.hpp"
#include "selftrig/scalar_system.hpp"

#include <random>
#include <vector>

namespace selftrig {

// One predicted event checked against the dense-grid oracle.
struct EventCheck {
    int k = 0;
    double t_k = 0.0;         // anchor the prediction started from
    double t_predicted = 0.0; // continuous prediction
    double t_scan = 0.0;      // oracle crossing, true root within one grid step below
    double delta = 0.0;       // |t_predicted - t_scan|
    double tolerance = 0.0;   // max(tol2_used, 2 * grid_step)
    double predictor_runtime = 0.0; // seconds
    double inter_event = 0.0; // t_predicted - t_k
    bool ok = false;
};

// Replays the continuous (ungridded) event sequence from the initial state:
// predict, dense-scan the same segment, advance exactly to the predicted
// instant, reset the error block and re-anchor W at the attained V.
std::vector<EventCheck> crosscheck_events(const PreparedRun& run, int count, double grid_step);

// Random stable closed loop with a synthesized certificate, state dimension
// 1..4: dynamics are drawn shifted-Hurwitz, then A is recovered as F + BK so
// the loop is stabilized by construction.
struct RandomLoop {
    LtiSystem sys;
    Feedback fb;
    PlfCertificate cert;
};

RandomLoop random_stable_loop(std::mt19937_64& rng);

PreparedRun prepare_loop(const RandomLoop& loop, const SolverParams& params,
                         const SimConfig& sim);

// For 1-state loops: the PLF minimizer sits at a fixed offset from each event
// anchor; compares the damped-Newton result against the closed form.
struct ScalarEventCheck {
    int k = 0;
    double t_k = 0.0;
    double rho_offset = 0.0; // numeric rho_k - t_k
    double delta = 0.0;      // |numeric offset - analytic offset|
};

struct ScalarReport {
    GainValidity validity;
    double analytic_offset = 0.0;
    std::vector<ScalarEventCheck> events;
    double worst_delta = 0.0;
};

ScalarReport scalar_crosscheck(const PreparedRun& run, const ScalarSystem& ssys, int count);

// Builds the 1-d analytic model from a prepared single-state run.
ScalarSystem scalar_from_run(const PreparedRun& run, const ScalarExtras& extras);

} // namespace selftrig
