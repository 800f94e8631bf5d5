#pragma once

namespace selftrig {

// One-dimensional plant dx/dt = ax + bu with output y = cx, state feedback
// gain K, PLF scale p and design margin q. Closed-form machinery used as an
// analytic oracle for the predictor.
struct ScalarSystem {
    double a;
    double b;
    double c; // carried for fidelity; control uses the state directly
    double K;
    double p;
    double q;
};

// Validates a != 0, b != 0, c != 0, p > 0, q > 0, a - bK < 0 and
// 2p(a - bK) <= -q. Throws ConfigError naming the violated constraint.
ScalarSystem make_scalar_system(double a, double b, double c, double K, double p, double q);

// x(t) = (bK/a + (1 - bK/a) e^{a (t - t_k)}) x_k under the control held at t_k.
double scalar_state(const ScalarSystem& sys, double x_k, double t_k, double t);

// The PLF minimizer instant rho_k = t_k + (1/a) ln(bK / (bK - a)); the offset
// from t_k is independent of the state.
double rho_k_analytic(const ScalarSystem& sys, double t_k);

struct GainValidity {
    bool valid;          // bK/(bK - a) > 0, so rho_k exists
    bool a_positive;     // which sign case applied
    double ratio;        // bK/(bK - a)
    bool rho_after_tk;   // ratio > 1 (meaningful for a > 0)
};

GainValidity validate_gain(const ScalarSystem& sys);

} // namespace selftrig
