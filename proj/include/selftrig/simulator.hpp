#pragma once

#include "selftrig/predictor.hpp"

#include <optional>
#include <vector>

namespace selftrig {

struct SimConfig {
    double T_s = 1e-3;
    double horizon = 7.0;
    double settle_threshold = 0.05;
};

struct EventRecord {
    int k = 0;
    double t_k = 0.0;          // grid-aligned applied instant
    double t_predicted = 0.0;  // continuous prediction the floor came from
    double inter_event = 0.0;  // t_k - previous applied instant
    double W_k = 0.0;          // threshold anchor right after the update
    double predictor_runtime = 0.0; // seconds, reported only
};

// Columnar sampled history at every grid multiple of T_s in [0, horizon].
struct Trace {
    std::vector<double> t;
    std::vector<Vector> x;
    std::vector<Vector> u;
    std::vector<double> V;
    std::vector<double> W;
    std::vector<char> event;
};

struct Summary {
    std::optional<double> settling_time; // first grid time after which ||x|| stays below threshold
    int event_count = 0;
    double lambda_max = 0.0;
    double min_inter_event = 0.0;
    double mean_inter_event = 0.0;
    double max_inter_event = 0.0;
    // max V/W over non-event rows; event rows carry V = W by construction
    double max_V_over_W = 0.0;
    std::vector<double> runtime_ratio; // predictor_runtime / inter_event per event
};

struct SimResult {
    Trace trace;
    std::vector<EventRecord> events;
    Summary summary;
};

// Zero-order-hold closed loop driven by the event predictor. The state
// advances by the cached exact transition over T_s; control updates apply at
// predicted event times floored to the grid, resetting the error block,
// re-anchoring W at V(xi(t_k)) and refreshing tol2. V > W at any grid point
// is a hard CertificateError; predictor failures propagate.
SimResult run(const LtiSystem& sys, const Feedback& fb, const PlfCertificate& cert,
              const SolverParams& params, const SimConfig& sim);

Summary summarize(const Trace& trace, const std::vector<EventRecord>& events, double lambda_max,
                  double settle_threshold, double T_s);

} // namespace selftrig
