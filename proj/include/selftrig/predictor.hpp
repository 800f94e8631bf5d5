#pragma once

#include "selftrig/certificate.hpp"

namespace selftrig {

struct SolverParams {
    int max_iter = 50;
    double beta = 0.35;
    double kappa1 = 0.01;
    double tol1 = 1e-5;
    double kappa2 = 0.25;
    double tol2_base = 1e-5;
    // Forward probing gives up at t_k + horizon_factor * (rho_k - t_k).
    double horizon_factor = 100.0;
};

// Throws ConfigError naming the offending field when out of range.
void validate(const SolverParams& params);

// Z(t_min) > 0 > Z(t_max): the crossing lies inside.
struct Bracket {
    double t_min;
    double t_max;
};

// Everything one prediction reads, bundled by value so contexts are
// self-contained and shareable across threads.
struct PredictionContext {
    AugmentedDynamics dyn;
    PlfCertificate cert;
    PlfDerivativeMatrices derivs;
    ThresholdSegment seg;
    AugmentedState event_state;
};

PredictionContext make_context(const AugmentedDynamics& dyn, const PlfCertificate& cert,
                               const PlfDerivativeMatrices& derivs, const ThresholdSegment& seg,
                               const AugmentedState& event_state);

// Convenience evaluations at absolute time t >= seg.t_k.
AugmentedState state_at(const PredictionContext& ctx, double t);
PlfValue plf_at(const PredictionContext& ctx, double t);
GapValue gap_at(const PredictionContext& ctx, double t);

struct MinimizeResult {
    double rho;
    int iterations;
    bool converged;
};

// Damped Newton descent on V(xi(t)) from t_k with backtracking (Armijo
// sufficient decrease, shrink factor beta); step = -dV/|d2V|. Returns the
// first local minimizer past t_k, or the last iterate flagged unconverged
// when max_iter runs out.
MinimizeResult minimize_plf(const PredictionContext& ctx, const SolverParams& params);

// Probes outward from rho_k in steps of +-kappa2*(rho_k - t_k) until Z
// changes sign; the backward branch halves the step whenever it would land
// at or below t_k. Returns the last two probe points straddling the change.
Bracket find_bracket(double rho_k, const PredictionContext& ctx, const SolverParams& params);

struct RootResult {
    double t;
    int iterations;
    bool converged;
};

// Safeguarded Newton: iterate starts at the bracket midpoint; a Newton step
// is rejected for a bisection step when it leaves the open bracket or fails
// to halve the step before last. Terminates when |step| < tol2.
RootResult newton_bisection(const Bracket& bracket, const PredictionContext& ctx,
                            const SolverParams& params, double tol2);

// Root tolerance tightens as the threshold decays: W_k >= 1 keeps tol2_base,
// below that 10^(-5 - ceil(|log10 W_k|)).
double dynamic_tol2(double W_k, const SolverParams& params);

struct EventPrediction {
    double t_next;
    double rho;
    double tol2_used;
    bool minimum_is_event;  // |Z(rho)| within tol_z: the minimizer itself is the event
    bool backward_bracket;  // crossing found before rho rather than after
    int minimize_iterations = 0;
    int root_iterations = 0;
    Bracket bracket{0.0, 0.0};
};

// minimize -> (short-circuit | bracket -> safeguarded Newton).
EventPrediction next_event(const PredictionContext& ctx, const SolverParams& params);

} // namespace selftrig
