#include "selftrig/predictor.hpp"
#include "selftrig/errors.hpp"
#include "selftrig/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace selftrig {

namespace {

void check_range(bool ok, const char* field, const char* constraint, double got) {
    if (!ok)
        throw ConfigError(std::string("solver.") + field + ": must satisfy " + constraint +
                          ", got " + std::to_string(got));
}

// |Z| below this counts as an exact hit; scaled because Z carries PLF units.
double tol_z(double W_k) {
    return 1e-12 * std::max(1.0, W_k);
}

} // namespace

void validate(const SolverParams& p) {
    if (p.max_iter < 1)
        throw ConfigError("solver.max_iter: must be >= 1, got " + std::to_string(p.max_iter));
    check_range(p.beta > 0.0 && p.beta < 1.0, "beta", "beta in (0,1)", p.beta);
    check_range(p.kappa1 > 0.0 && p.kappa1 < 0.5, "kappa1", "kappa1 in (0,0.5)", p.kappa1);
    check_range(p.tol1 > 0.0, "tol1", "tol1 > 0", p.tol1);
    check_range(p.kappa2 > 0.0 && p.kappa2 <= 0.5, "kappa2", "kappa2 in (0,0.5]", p.kappa2);
    check_range(p.tol2_base > 0.0, "tol2_base", "tol2_base > 0", p.tol2_base);
    check_range(p.horizon_factor > 1.0, "horizon_factor", "horizon_factor > 1", p.horizon_factor);
}

PredictionContext make_context(const AugmentedDynamics& dyn, const PlfCertificate& cert,
                               const PlfDerivativeMatrices& derivs, const ThresholdSegment& seg,
                               const AugmentedState& event_state) {
    if (seg.t_k != event_state.t)
        throw std::invalid_argument("make_context: segment anchor differs from event state time");
    const Eigen::Index n = dyn.n;
    if (event_state.xi.size() != 2 * n)
        throw std::invalid_argument("make_context: state dimension mismatch");
    if (event_state.xi.tail(n).cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("make_context: event state must have a zero error block");
    if (!(seg.W_k > 0.0))
        throw std::invalid_argument("make_context: threshold W_k must be positive");
    return PredictionContext{dyn, cert, derivs, seg, event_state};
}

AugmentedState state_at(const PredictionContext& ctx, double t) {
    return propagate(ctx.dyn, ctx.event_state, t - ctx.event_state.t);
}

PlfValue plf_at(const PredictionContext& ctx, double t) {
    return evaluate_plf(ctx.cert, ctx.derivs, state_at(ctx, t));
}

GapValue gap_at(const PredictionContext& ctx, double t) {
    return evaluate_gap(ctx.seg, ctx.cert, ctx.derivs, ctx.dyn, ctx.event_state, t);
}

MinimizeResult minimize_plf(const PredictionContext& ctx, const SolverParams& params) {
    const double t_k = ctx.seg.t_k;
    double rho = t_k;
    for (int it = 1; it <= params.max_iter; ++it) {
        const PlfValue at = plf_at(ctx, rho);
        double drho;
        if (std::abs(at.d2V) < 1e-30) {
            // curvature vanished: fall back to a fixed fractional step downhill
            drho = -std::copysign(params.tol1, at.dV);
        } else {
            drho = -at.dV / std::abs(at.d2V);
        }
        double s = 1.0;
        while (true) {
            const double cand = rho + s * drho;
            if (cand >= t_k &&
                plf_at(ctx, cand).V - at.V < params.kappa1 * at.dV * s * drho)
                break;
            s *= params.beta;
            if (s < 1e-20) break;
        }
        // convergence is judged on the applied update itself: the rounded
        // difference of two nearby times can dip below tol1 when the step
        // equals tol1 exactly (the vanished-curvature fallback)
        const double step = s * drho;
        rho += step;
        if (std::abs(step) < params.tol1)
            return MinimizeResult{rho, it, true};
    }
    log::warn("minimize_plf: max_iter reached without convergence");
    return MinimizeResult{rho, params.max_iter, false};
}

Bracket find_bracket(double rho_k, const PredictionContext& ctx, const SolverParams& params) {
    const double t_k = ctx.seg.t_k;
    if (!(rho_k > t_k))
        throw PredictorError("find_bracket: degenerate probe step, rho_k does not exceed t_k");
    const double z1 = gap_at(ctx, rho_k).Z;
    const double tz = tol_z(ctx.seg.W_k);
    const double step0 = params.kappa2 * (rho_k - t_k);

    // The event is the earliest time Z falls through zero after t_k. Z can dip
    // below zero and recover before rho_k (the minimizer tracks V alone, so a
    // brief threshold crossing leaves no trace in it), and several crossings
    // can coexist below rho_k. The stretch (t_k, rho_k) is therefore swept
    // first, walking from rho_k toward t_k and keeping the earliest probe pair
    // that straddles a fall through zero; each pair has Z >= 0 below and
    // Z < 0 above, which is the orientation the root refinement expects. Probe
    // spacing shrinks only to stay strictly above t_k, and the walk stops once
    // the spacing is at rounding scale.
    {
        const double theta_min = 4.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::max(std::abs(t_k), rho_k), 1.0);
        double theta = step0;
        double prev = rho_k;
        double z_prev = z1;
        bool found = false;
        Bracket earliest{};
        for (long iter = 0; iter < 100000 && theta >= theta_min; ++iter) {
            const double t2 = prev - theta;
            if (t2 <= t_k) {
                theta /= 2.0;
                continue;
            }
            const double z2 = gap_at(ctx, t2).Z;
            if (z_prev < 0.0 && (z2 > 0.0 || std::abs(z2) <= tz)) {
                earliest = Bracket{t2, prev};
                found = true;
            }
            prev = t2;
            z_prev = z2;
        }
        if (found)
            return earliest;
        if (z1 < 0.0)
            throw PredictorError(
                "find_bracket: no fall of Z through zero resolved between t_k and rho_k");
    }

    // nothing below rho_k: the crossing lies ahead, walk forward to enclose it
    const double horizon = t_k + params.horizon_factor * (rho_k - t_k);
    double prev = rho_k;
    double t2 = rho_k + step0;
    for (long iter = 0; iter < 100000; ++iter) {
        if (t2 > horizon)
            throw PredictorError("find_bracket: no sign change of Z up to the probing horizon " +
                                 std::to_string(horizon));
        const double z2 = gap_at(ctx, t2).Z;
        if (z2 < 0.0 || std::abs(z2) <= tz)
            return Bracket{prev, t2};
        prev = t2;
        t2 += step0;
    }
    throw PredictorError("find_bracket: probe loop failed to terminate");
}

RootResult newton_bisection(const Bracket& bracket, const PredictionContext& ctx,
                            const SolverParams& params, double tol2) {
    if (!(tol2 > 0.0))
        throw std::invalid_argument("newton_bisection: tol2 must be positive");
    if (!(bracket.t_min < bracket.t_max))
        throw PredictorError("newton_bisection: empty bracket");
    const double tz = tol_z(ctx.seg.W_k);
    // The event is a down-crossing of Z. A vanishing Z at the left edge is
    // the root only where Z is falling; right after an applied event Z rises
    // from exactly zero, and the crossing then lies deeper inside the
    // bracket, so a rising (near-)zero left edge is kept as a bracket side.
    const GapValue g_lo = gap_at(ctx, bracket.t_min);
    if (std::abs(g_lo.Z) <= tz && g_lo.dZ < 0.0) return RootResult{bracket.t_min, 0, true};
    const double z_hi = gap_at(ctx, bracket.t_max).Z;
    if (std::abs(z_hi) <= tz) return RootResult{bracket.t_max, 0, true};
    if (!(g_lo.Z >= 0.0) || !(z_hi < 0.0))
        throw PredictorError("newton_bisection: bracket does not straddle a +/- sign change");

    double t_min = bracket.t_min;
    double t_max = bracket.t_max;
    double t = 0.5 * (t_min + t_max);
    double dt = t_max - t_min;
    double dt_before_last = dt;
    GapValue g = gap_at(ctx, t);
    for (int it = 1; it <= params.max_iter; ++it) {
        const double newton = (g.dZ != 0.0) ? g.Z / g.dZ
                                            : std::numeric_limits<double>::infinity();
        const double cand = t - newton;
        const bool take_newton = std::isfinite(newton) && cand > t_min && cand < t_max &&
                                 std::abs(newton) <= std::abs(dt_before_last) / 2.0;
        dt_before_last = dt;
        if (take_newton) {
            dt = newton;
            t = cand;
        } else {
            dt = 0.5 * (t_max - t_min);
            t = t_min + dt;
        }
        if (std::abs(dt) < tol2)
            return RootResult{t, it, true};
        g = gap_at(ctx, t);
        if (g.Z > 0.0)
            t_min = t;
        else
            t_max = t;
    }
    log::warn("newton_bisection: max_iter reached, final step " + std::to_string(dt));
    return RootResult{t, params.max_iter, false};
}

double dynamic_tol2(double W_k, const SolverParams& params) {
    if (!(W_k > 0.0))
        throw std::invalid_argument("dynamic_tol2: W_k must be positive");
    if (W_k >= 1.0) return params.tol2_base;
    const double phi = std::ceil(std::abs(std::log10(W_k)));
    return std::pow(10.0, -5.0 - phi);
}

EventPrediction next_event(const PredictionContext& ctx, const SolverParams& params) {
    EventPrediction out{};
    const MinimizeResult min = minimize_plf(ctx, params);
    out.rho = min.rho;
    out.minimize_iterations = min.iterations;
    if (!min.converged)
        log::warn("next_event: PLF minimization did not converge, continuing from rho = " +
                  std::to_string(min.rho));

    const double z_rho = gap_at(ctx, min.rho).Z;
    out.tol2_used = dynamic_tol2(ctx.seg.W_k, params);
    if (std::abs(z_rho) <= tol_z(ctx.seg.W_k)) {
        out.minimum_is_event = true;
        out.t_next = min.rho;
        return out;
    }
    out.bracket = find_bracket(min.rho, ctx, params);
    out.backward_bracket = out.bracket.t_max <= min.rho;
    const RootResult root = newton_bisection(out.bracket, ctx, params, out.tol2_used);
    out.root_iterations = root.iterations;
    if (!root.converged)
        log::warn("next_event: root refinement hit max_iter");
    out.t_next = root.t;
    if (!(out.t_next > ctx.seg.t_k))
        throw PredictorError("next_event: predicted event does not advance past t_k");
    return out;
}

} // namespace selftrig
