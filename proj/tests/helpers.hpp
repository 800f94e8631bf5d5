#pragma once

#include "selftrig/certificate.hpp"
#include "selftrig/plant.hpp"
#include "selftrig/predictor.hpp"

namespace testutil {

using selftrig::Matrix;
using selftrig::Vector;

// The shipped 3-state unstable benchmark (configs/unstable3.json).
inline Matrix bench_A() {
    Matrix A(3, 3);
    A << 1, 1, 0, -2, 0, 4, 5, 4, -7;
    return A;
}

inline Matrix bench_B() {
    Matrix B(3, 1);
    B << -1, 0, 1;
    return B;
}

inline Matrix bench_K() {
    Matrix K(1, 3);
    K << 8.36744292, 26.30960966, 10.35744292;
    return K;
}

inline Matrix bench_P() {
    Matrix P(3, 3);
    P << 275.7, 1025.5, 577.9, 1025.5, 3840.1, 2173.5, 577.9, 2173.5, 1234.1;
    return P;
}

inline Vector bench_x0() {
    Vector x(3);
    x << -2, 3, 5;
    return x;
}

struct Loop {
    selftrig::LtiSystem sys;
    selftrig::Feedback fb;
    selftrig::PlfCertificate cert;
    selftrig::PlfDerivativeMatrices derivs;
    selftrig::AugmentedDynamics dyn;
};

inline Loop bench_loop(double alpha = 2.18) {
    using namespace selftrig;
    LtiSystem sys = make_lti(bench_A(), bench_B(), bench_x0());
    Feedback fb = make_feedback(sys, bench_K());
    PlfCertificate cert = make_certificate(sys, fb, alpha, bench_P(),
                                           W0Spec{W0Spec::Kind::multiplier, 1.3});
    PlfDerivativeMatrices derivs = build_derivative_matrices(sys, fb, cert.P);
    AugmentedDynamics dyn = build_closed_loop(sys, fb);
    return Loop{std::move(sys), std::move(fb), std::move(cert), std::move(derivs),
                std::move(dyn)};
}

// Double integrator with synthesized P (configs/double_integrator.json).
inline Loop integrator_loop() {
    using namespace selftrig;
    Matrix A(2, 2), B(2, 1), K(1, 2);
    A << 0, 1, 0, 0;
    B << 0, 1;
    K << 2, 3;
    Vector x0(2);
    x0 << 1, -0.5;
    LtiSystem sys = make_lti(A, B, x0);
    Feedback fb = make_feedback(sys, K);
    PlfCertificate cert =
        make_certificate(sys, fb, 0.8, std::nullopt, W0Spec{W0Spec::Kind::multiplier, 1.3});
    PlfDerivativeMatrices derivs = build_derivative_matrices(sys, fb, cert.P);
    AugmentedDynamics dyn = build_closed_loop(sys, fb);
    return Loop{std::move(sys), std::move(fb), std::move(cert), std::move(derivs),
                std::move(dyn)};
}

// 1-d loop dx = x + u, u = -2 x(t_k), V = x^2: minimizer offset is ln 2.
inline Loop scalar_loop(double alpha = 1.0, double w0_mult = 1.3) {
    using namespace selftrig;
    Matrix A = Matrix::Constant(1, 1, 1.0);
    Matrix B = Matrix::Constant(1, 1, 1.0);
    Matrix K = Matrix::Constant(1, 1, 2.0);
    Vector x0 = Vector::Constant(1, 2.0);
    LtiSystem sys = make_lti(A, B, x0);
    Feedback fb = make_feedback(sys, K);
    PlfCertificate cert = make_certificate(sys, fb, alpha, Matrix::Identity(1, 1),
                                           W0Spec{W0Spec::Kind::multiplier, w0_mult});
    PlfDerivativeMatrices derivs = build_derivative_matrices(sys, fb, cert.P);
    AugmentedDynamics dyn = build_closed_loop(sys, fb);
    return Loop{std::move(sys), std::move(fb), std::move(cert), std::move(derivs),
                std::move(dyn)};
}

inline selftrig::PredictionContext context_at(const Loop& loop, const Vector& x, double t,
                                              double W) {
    const selftrig::AugmentedState st = selftrig::reset_event_state(x, t);
    return selftrig::make_context(loop.dyn, loop.cert, loop.derivs,
                                  selftrig::ThresholdSegment{W, t, loop.cert.alpha}, st);
}

inline selftrig::PredictionContext initial_context(const Loop& loop) {
    return context_at(loop, loop.sys.x0, 0.0, loop.cert.W0);
}

} // namespace testutil
