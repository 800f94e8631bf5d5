#include "selftrig/simulator.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/log.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace selftrig {

namespace {

double timed_prediction(const PredictionContext& ctx, const SolverParams& params,
                        EventPrediction& out) {
    const auto start = std::chrono::steady_clock::now();
    out = next_event(ctx, params);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

SimResult run(const LtiSystem& sys, const Feedback& fb, const PlfCertificate& cert,
              const SolverParams& params, const SimConfig& sim) {
    if (!(sim.T_s > 0.0)) throw ConfigError("sim.T_s: must be positive");
    if (!(sim.horizon > 0.0)) throw ConfigError("sim.horizon: must be positive");
    validate(params);

    const Eigen::Index n = sys.n();
    const AugmentedDynamics dyn = build_closed_loop(sys, fb);
    const PlfDerivativeMatrices derivs = build_derivative_matrices(sys, fb, cert.P);
    const Matrix Phi_s = transition(dyn, sim.T_s);
    const long N = std::lround(sim.horizon / sim.T_s);

    SimResult result;
    Trace& trace = result.trace;
    trace.t.reserve(N + 1);

    AugmentedState state = reset_event_state(sys.x0, 0.0);
    Vector u_held = -fb.K * sys.x0;
    double t_anchor = 0.0;
    double W_anchor = cert.W0;
    const double V0 = evaluate_plf(cert, derivs, state).V;
    // V = 0 means x = 0 (P > 0): the loop is at the origin and stays there;
    // no threshold crossing can ever occur.
    bool equilibrium = (V0 == 0.0);

    EventPrediction pending{};
    double pending_runtime = 0.0;
    long next_idx = N + 1; // sentinel: no event scheduled
    if (!equilibrium) {
        const PredictionContext ctx = make_context(
            dyn, cert, derivs, ThresholdSegment{W_anchor, 0.0, cert.alpha}, state);
        pending_runtime = timed_prediction(ctx, params, pending);
        next_idx = static_cast<long>(std::floor(pending.t_next / sim.T_s));
        if (next_idx < 1) next_idx = 1;
        log::info("initial prediction: t = " + std::to_string(pending.t_next));
    }

    Vector xi = state.xi;
    double prev_applied = 0.0;
    for (long i = 0; i <= N; ++i) {
        const double t = static_cast<double>(i) * sim.T_s;
        AugmentedState here{t, xi};
        double V_now = evaluate_plf(cert, derivs, here).V;
        double W_now;
        bool is_event = false;

        if (i == next_idx && i > 0 && !equilibrium) {
            is_event = true;
            const Vector x_now = xi.head(n);
            state = reset_event_state(x_now, t);
            xi = state.xi;
            u_held = -fb.K * x_now;
            const double W_new = evaluate_plf(cert, derivs, state).V;
            EventRecord rec;
            rec.k = static_cast<int>(result.events.size()) + 1;
            rec.t_k = t;
            rec.t_predicted = pending.t_next;
            rec.inter_event = t - prev_applied;
            rec.W_k = W_new;
            rec.predictor_runtime = pending_runtime;
            result.events.push_back(rec);
            prev_applied = t;
            t_anchor = t;
            W_anchor = W_new;
            V_now = W_new;
            W_now = W_new;
            if (W_new == 0.0) {
                equilibrium = true;
                next_idx = N + 1;
            } else {
                const PredictionContext ctx = make_context(
                    dyn, cert, derivs, ThresholdSegment{W_anchor, t, cert.alpha}, state);
                pending_runtime = timed_prediction(ctx, params, pending);
                const long ni = static_cast<long>(std::floor(pending.t_next / sim.T_s));
                // never re-fire on the current grid point; one step is the
                // finest cadence the grid supports
                next_idx = (ni > i) ? ni : i + 1;
                log::debug("event " + std::to_string(rec.k) + " at t = " + std::to_string(t) +
                           ", next prediction " + std::to_string(pending.t_next));
            }
        } else {
            W_now = equilibrium && W_anchor == 0.0
                        ? 0.0
                        : W_anchor * std::exp(-cert.alpha * (t - t_anchor));
            if (V_now > W_now * (1.0 + 1e-12))
                throw CertificateError("simulation: V = " + std::to_string(V_now) +
                                       " exceeded W = " + std::to_string(W_now) + " at t = " +
                                       std::to_string(t));
        }

        trace.t.push_back(t);
        trace.x.push_back(xi.head(n));
        trace.u.push_back(u_held);
        trace.V.push_back(V_now);
        trace.W.push_back(W_now);
        trace.event.push_back(is_event ? 1 : 0);

        xi = Phi_s * xi;
    }

    result.summary = summarize(trace, result.events, cert.lambda_max, sim.settle_threshold,
                               sim.T_s);
    return result;
}

Summary summarize(const Trace& trace, const std::vector<EventRecord>& events, double lambda_max,
                  double settle_threshold, double T_s) {
    if (trace.t.empty()) throw std::invalid_argument("summarize: empty trace");
    Summary s;
    s.event_count = static_cast<int>(events.size());
    s.lambda_max = lambda_max;

    // settling: latest grid point at or above threshold decides t*
    long last_above = -1;
    for (long i = static_cast<long>(trace.t.size()) - 1; i >= 0; --i) {
        if (trace.x[i].norm() >= settle_threshold) {
            last_above = i;
            break;
        }
    }
    if (last_above < 0)
        s.settling_time = 0.0;
    else if (last_above + 1 < static_cast<long>(trace.t.size()))
        s.settling_time = static_cast<double>(last_above + 1) * T_s;
    else
        s.settling_time = std::nullopt;

    if (!events.empty()) {
        double mn = events.front().inter_event, mx = mn, sum = 0.0;
        for (const auto& e : events) {
            mn = std::min(mn, e.inter_event);
            mx = std::max(mx, e.inter_event);
            sum += e.inter_event;
            s.runtime_ratio.push_back(e.inter_event > 0.0
                                          ? e.predictor_runtime / e.inter_event
                                          : 0.0);
        }
        s.min_inter_event = mn;
        s.max_inter_event = mx;
        s.mean_inter_event = sum / static_cast<double>(events.size());
    }

    double worst = 0.0;
    for (size_t i = 0; i < trace.t.size(); ++i) {
        if (trace.event[i]) continue;
        if (trace.W[i] > 0.0) worst = std::max(worst, trace.V[i] / trace.W[i]);
    }
    s.max_V_over_W = worst;
    return s;
}

} // namespace selftrig
