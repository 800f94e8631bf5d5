#include "selftrig/plant.hpp"
#include "selftrig/errors.hpp"

#include <stdexcept>
#include <string>

namespace selftrig {

LtiSystem make_lti(const Matrix& A, const Matrix& B, const Vector& x0) {
    if (A.rows() != A.cols())
        throw ConfigError("system.A: must be square, got " + std::to_string(A.rows()) + "x" +
                          std::to_string(A.cols()));
    if (B.rows() != A.rows())
        throw ConfigError("system.B: row count " + std::to_string(B.rows()) +
                          " does not match state dimension " + std::to_string(A.rows()));
    if (x0.size() != A.rows())
        throw ConfigError("system.x0: length " + std::to_string(x0.size()) +
                          " does not match state dimension " + std::to_string(A.rows()));
    require_finite(A, "system.A");
    require_finite(B, "system.B");
    if (!x0.allFinite()) throw ConfigError("system.x0: non-finite entries");
    return LtiSystem{A, B, x0};
}

Feedback make_feedback(const LtiSystem& sys, const Matrix& K) {
    if (K.rows() != sys.m() || K.cols() != sys.n())
        throw ConfigError("feedback.K: must be " + std::to_string(sys.m()) + "x" +
                          std::to_string(sys.n()) + ", got " + std::to_string(K.rows()) + "x" +
                          std::to_string(K.cols()));
    require_finite(K, "feedback.K");
    const Matrix F = sys.A - sys.B * K;
    if (!is_hurwitz(F))
        throw ConfigError("feedback.K: A - B*K is not Hurwitz (max eigenvalue real part " +
                          std::to_string(max_real_eigenvalue(F)) + ")");
    return Feedback{K};
}

AugmentedDynamics build_closed_loop(const LtiSystem& sys, const Feedback& fb) {
    const Eigen::Index n = sys.n();
    const Matrix F = sys.A - sys.B * fb.K;
    const Matrix BK = sys.B * fb.K;
    Matrix Psi(2 * n, 2 * n);
    Psi.topLeftCorner(n, n) = F;
    Psi.topRightCorner(n, n) = BK;
    Psi.bottomLeftCorner(n, n) = F;
    Psi.bottomRightCorner(n, n) = BK;
    return AugmentedDynamics{Psi, n};
}

AugmentedState propagate(const AugmentedDynamics& dyn, const AugmentedState& at_event, double dt) {
    if (dt < 0.0) throw std::invalid_argument("propagate: dt must be nonnegative");
    if (dt == 0.0) return at_event;
    AugmentedState out;
    out.t = at_event.t + dt;
    out.xi = mat_exp(dyn.Psi, dt) * at_event.xi;
    return out;
}

Matrix transition(const AugmentedDynamics& dyn, double dt) {
    return mat_exp(dyn.Psi, dt);
}

AugmentedState reset_event_state(const Vector& x, double t) {
    if (!x.allFinite()) throw std::invalid_argument("reset_event_state: non-finite state");
    AugmentedState s;
    s.t = t;
    s.xi = Vector::Zero(2 * x.size());
    s.xi.head(x.size()) = x;
    return s;
}

} // namespace selftrig
