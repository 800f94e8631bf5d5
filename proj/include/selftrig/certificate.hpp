#pragma once

#include "selftrig/plant.hpp"

#include <optional>

namespace selftrig {

// Quadratic pseudo-Lyapunov certificate: V(xi) = xi' calP xi with
// calP = blkdiag(P, 0), decay budget alpha < lambda_max, initial threshold W0.
struct PlfCertificate {
    Matrix P;
    double lambda_max = 0.0;
    double alpha = 0.0;
    double W0 = 0.0;
    Matrix calP; // 2n x 2n
    bool synthesized = false; // P produced here rather than user-supplied
};

// Precomputed factors of the time derivatives of V along the augmented flow:
//   dV  = x'Mx + 2x'Le
//   d2V = x'Lambda x + 2x'Gamma e + e'gamma e
struct PlfDerivativeMatrices {
    Matrix M;
    Matrix L;
    Matrix Lambda;
    Matrix Gamma;
    Matrix gamma;
};

// One exponential threshold segment W(t) = W_k e^{-alpha (t - t_k)}.
struct ThresholdSegment {
    double W_k = 0.0;
    double t_k = 0.0;
    double alpha = 0.0;

    double value(double t) const;
    double slope(double t) const;
};

// Supremal decay rate certifiable for the closed loop:
// -2 * max Re(eig(A - BK)).
double lambda_max(const LtiSystem& sys, const Feedback& fb);

// P > 0 with (A-BK)'P + P(A-BK) <= -lambda*P, from the shifted Lyapunov
// equation (F + lambda/2 I)'P + P(F + lambda/2 I) = -I. Requires
// 0 < lambda < lambda_max.
Matrix synthesize_P(const LtiSystem& sys, const Feedback& fb, double lambda);

PlfDerivativeMatrices build_derivative_matrices(const LtiSystem& sys, const Feedback& fb,
                                                const Matrix& P);

struct PlfValue {
    double V;
    double dV;
    double d2V;
};

PlfValue evaluate_plf(const PlfCertificate& cert, const PlfDerivativeMatrices& derivs,
                      const AugmentedState& xi);

struct GapValue {
    double Z;
    double dZ;
};

// Z(t) = W(t) - V(xi(t)) and its time derivative, with xi(t) propagated from
// the event state.
GapValue evaluate_gap(const ThresholdSegment& seg, const PlfCertificate& cert,
                      const PlfDerivativeMatrices& derivs, const AugmentedDynamics& dyn,
                      const AugmentedState& event_state, double t);

struct W0Spec {
    enum class Kind { multiplier, absolute };
    Kind kind = Kind::multiplier;
    double value = 1.3;
};

// Assembles and validates the full certificate. P is synthesized with
// lambda = alpha when absent. Validation: P > 0, 0 < alpha < lambda_max,
// eig(M + alpha*P) <= eps_cert (1e-8*||P|| synthesized, 1e-1*||P||
// user-supplied, spectral norm), W0 >= V(xi0).
PlfCertificate make_certificate(const LtiSystem& sys, const Feedback& fb, double alpha,
                                const std::optional<Matrix>& P_user, const W0Spec& w0);

} // namespace selftrig
