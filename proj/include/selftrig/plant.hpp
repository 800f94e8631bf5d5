#pragma once

#include "selftrig/matrix_ops.hpp"

namespace selftrig {

// Plant dx/dt = Ax + Bu with initial state x0. A may be singular; (A, B)
// stabilizability is the caller's responsibility.
struct LtiSystem {
    Matrix A;
    Matrix B;
    Vector x0;

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
};

LtiSystem make_lti(const Matrix& A, const Matrix& B, const Vector& x0);

// State feedback u = -Kx(t_k). Construction verifies A - BK is Hurwitz.
struct Feedback {
    Matrix K;
};

Feedback make_feedback(const LtiSystem& sys, const Matrix& K);

// Dynamics of the augmented state xi = [x; e] between updates:
// Psi = [[A-BK, BK], [A-BK, BK]] (both block rows identical).
struct AugmentedDynamics {
    Matrix Psi;
    Eigen::Index n; // plant dimension; Psi is 2n x 2n
};

// xi = [x; e] at time t. e = x(t) - x(t_k) is the hold error; at an update
// instant e = 0.
struct AugmentedState {
    double t = 0.0;
    Vector xi;
};

AugmentedDynamics build_closed_loop(const LtiSystem& sys, const Feedback& fb);

// xi(t_k + dt) = e^{Psi*dt} xi(t_k) under the control held at t_k.
AugmentedState propagate(const AugmentedDynamics& dyn, const AugmentedState& at_event, double dt);

// The discrete transition e^{Psi*dt}; callers stepping a fixed grid cache it.
Matrix transition(const AugmentedDynamics& dyn, double dt);

// [x; 0] at time t (the state right after a control update).
AugmentedState reset_event_state(const Vector& x, double t);

} // namespace selftrig
