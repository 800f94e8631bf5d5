#include "selftrig/verify.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/log.hpp"
#include "selftrig/predictor.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace selftrig {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::vector<EventCheck> crosscheck_events(const PreparedRun& run, int count, double grid_step) {
    if (count < 1)
        throw std::invalid_argument("crosscheck_events: count must be >= 1");
    if (!(grid_step > 0.0))
        throw std::invalid_argument("crosscheck_events: grid_step must be positive");

    std::vector<EventCheck> out;
    AugmentedState st = reset_event_state(run.sys.x0, 0.0);
    double W = run.cert.W0;
    for (int k = 0; k < count; ++k) {
        if (!(W > 0.0)) {
            log::info("crosscheck_events: threshold reached zero, stopping at event " +
                      std::to_string(k));
            break;
        }
        const ThresholdSegment seg{W, st.t, run.cert.alpha};
        const PredictionContext ctx = make_context(run.dyn, run.cert, run.derivs, seg, st);

        const auto t0 = std::chrono::steady_clock::now();
        const EventPrediction pred = next_event(ctx, run.params);
        const double runtime = seconds_since(t0);

        const double span = pred.t_next - st.t;
        const ScanResult scan =
            dense_event_scan(ctx, grid_step, 2.0 * span + 1000.0 * grid_step);

        EventCheck chk;
        chk.k = k;
        chk.t_k = st.t;
        chk.t_predicted = pred.t_next;
        chk.t_scan = scan.found ? scan.t_found : std::numeric_limits<double>::quiet_NaN();
        chk.delta = scan.found ? std::abs(pred.t_next - scan.t_found)
                               : std::numeric_limits<double>::infinity();
        chk.tolerance = std::max(pred.tol2_used, 2.0 * grid_step);
        chk.predictor_runtime = runtime;
        chk.inter_event = span;
        chk.ok = chk.delta <= chk.tolerance;
        out.push_back(chk);

        const AugmentedState at = propagate(run.dyn, st, span);
        st = reset_event_state(at.xi.head(run.sys.n()), pred.t_next);
        W = evaluate_plf(run.cert, run.derivs, st).V;
    }
    return out;
}

RandomLoop random_stable_loop(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

    const int n = dim(rng);
    Matrix A, B, K;
    if (n == 1) {
        const double a = uniform(-2.0, 2.0);
        const double b = (u01(rng) < 0.5 ? -1.0 : 1.0) * uniform(0.3, 1.5);
        const double d = uniform(std::max(a, 0.0) + 0.5, std::max(a, 0.0) + 3.0);
        A = Matrix::Constant(1, 1, a);
        B = Matrix::Constant(1, 1, b);
        K = Matrix::Constant(1, 1, d / b); // a - bK = a - d <= -0.5
    } else {
        Matrix F(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) F(i, j) = uniform(-2.0, 2.0);
        // shift the spectrum strictly into the left half plane
        const double shift = max_real_eigenvalue(F) + uniform(0.5, 1.5);
        F.diagonal().array() -= shift;
        B = Matrix(n, 1);
        K = Matrix(1, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            B(i, 0) = uniform(-1.5, 1.5);
            K(0, i) = uniform(-1.5, 1.5);
        }
        A = F + B * K; // closed loop A - BK = F is Hurwitz by construction
    }

    Vector x0(n);
    do {
        for (Eigen::Index i = 0; i < n; ++i) x0(i) = uniform(-3.0, 3.0);
    } while (x0.norm() < 0.5);

    LtiSystem sys = make_lti(A, B, x0);
    Feedback fb = make_feedback(sys, K);
    const double alpha = uniform(0.5, 0.9) * lambda_max(sys, fb);
    PlfCertificate cert =
        make_certificate(sys, fb, alpha, std::nullopt, W0Spec{W0Spec::Kind::multiplier, 1.3});
    return RandomLoop{std::move(sys), std::move(fb), std::move(cert)};
}

PreparedRun prepare_loop(const RandomLoop& loop, const SolverParams& params,
                         const SimConfig& sim) {
    PlfDerivativeMatrices derivs = build_derivative_matrices(loop.sys, loop.fb, loop.cert.P);
    AugmentedDynamics dyn = build_closed_loop(loop.sys, loop.fb);
    return PreparedRun{loop.sys, loop.fb, loop.cert, std::move(derivs), std::move(dyn), params,
                       sim};
}

ScalarSystem scalar_from_run(const PreparedRun& run, const ScalarExtras& extras) {
    if (run.sys.n() != 1 || run.sys.m() != 1)
        throw ConfigError("scalar: system must have one state and one input, got " +
                          std::to_string(run.sys.n()) + " states, " +
                          std::to_string(run.sys.m()) + " inputs");
    const double a = run.sys.A(0, 0);
    const double b = run.sys.B(0, 0);
    const double K = run.fb.K(0, 0);
    const double p = run.cert.P(0, 0);
    const double q = extras.q ? *extras.q : p * std::abs(a - b * K);
    return make_scalar_system(a, b, extras.c, K, p, q);
}

ScalarReport scalar_crosscheck(const PreparedRun& run, const ScalarSystem& ssys, int count) {
    ScalarReport rep;
    rep.validity = validate_gain(ssys);
    rep.analytic_offset = rho_k_analytic(ssys, 0.0);

    AugmentedState st = reset_event_state(run.sys.x0, 0.0);
    double W = run.cert.W0;
    for (int k = 0; k < count && W > 0.0; ++k) {
        const ThresholdSegment seg{W, st.t, run.cert.alpha};
        const PredictionContext ctx = make_context(run.dyn, run.cert, run.derivs, seg, st);
        const MinimizeResult min = minimize_plf(ctx, run.params);

        ScalarEventCheck chk;
        chk.k = k;
        chk.t_k = st.t;
        chk.rho_offset = min.rho - st.t;
        chk.delta = std::abs(chk.rho_offset - rep.analytic_offset);
        rep.worst_delta = std::max(rep.worst_delta, chk.delta);
        rep.events.push_back(chk);

        const EventPrediction pred = next_event(ctx, run.params);
        const AugmentedState at = propagate(run.dyn, st, pred.t_next - st.t);
        st = reset_event_state(at.xi.head(1), pred.t_next);
        W = evaluate_plf(run.cert, run.derivs, st).V;
    }
    return rep;
}

} // namespace selftrig
