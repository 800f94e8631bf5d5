#include "selftrig/scalar_system.hpp"
#include "selftrig/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace selftrig {

ScalarSystem make_scalar_system(double a, double b, double c, double K, double p, double q) {
    if (a == 0.0) throw ConfigError("scalar.a: must be nonzero");
    if (b == 0.0) throw ConfigError("scalar.b: must be nonzero");
    if (c == 0.0) throw ConfigError("scalar.c: must be nonzero");
    if (!(p > 0.0)) throw ConfigError("scalar.p: must be positive, got " + std::to_string(p));
    if (!(q > 0.0)) throw ConfigError("scalar.q: must be positive, got " + std::to_string(q));
    const double f = a - b * K;
    if (!(f < 0.0))
        throw ConfigError("scalar gain: a - bK = " + std::to_string(f) +
                          " must be negative (closed loop stable)");
    if (!(2.0 * p * f <= -q))
        throw ConfigError("scalar margin: 2p(a - bK) = " + std::to_string(2.0 * p * f) +
                          " must not exceed -q = " + std::to_string(-q));
    return ScalarSystem{a, b, c, K, p, q};
}

double scalar_state(const ScalarSystem& sys, double x_k, double t_k, double t) {
    if (t < t_k) throw std::invalid_argument("scalar_state: t precedes t_k");
    const double r = sys.b * sys.K / sys.a;
    return (r + (1.0 - r) * std::exp(sys.a * (t - t_k))) * x_k;
}

double rho_k_analytic(const ScalarSystem& sys, double t_k) {
    const double bK = sys.b * sys.K;
    const double arg = bK / (bK - sys.a);
    if (!(arg > 0.0))
        throw std::logic_error("rho_k_analytic: log argument " + std::to_string(arg) +
                               " not positive; gain fails the validity cases");
    return t_k + std::log(arg) / sys.a;
}

GainValidity validate_gain(const ScalarSystem& sys) {
    const double bK = sys.b * sys.K;
    const double ratio = bK / (bK - sys.a);
    GainValidity v;
    v.ratio = ratio;
    v.valid = ratio > 0.0;
    v.a_positive = sys.a > 0.0;
    v.rho_after_tk = ratio > 1.0;
    return v;
}

} // namespace selftrig
