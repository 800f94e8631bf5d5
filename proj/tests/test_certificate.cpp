#include "selftrig/certificate.hpp"
#include "selftrig/errors.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace selftrig;

TEST_SUITE("certificate") {

TEST_CASE("lambda_max on the benchmark loop") {
    LtiSystem sys = make_lti(testutil::bench_A(), testutil::bench_B(), testutil::bench_x0());
    Feedback fb = make_feedback(sys, testutil::bench_K());
    CHECK(lambda_max(sys, fb) == doctest::Approx(2.28).epsilon(1e-9));
}

TEST_CASE("lambda_max on the double integrator") {
    testutil::Loop loop = testutil::integrator_loop();
    // poles -1 and -2: the slow pole bounds the certifiable decay
    CHECK(lambda_max(loop.sys, loop.fb) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("synthesize_P solves the shifted equation and certifies alpha") {
    LtiSystem sys = make_lti(testutil::bench_A(), testutil::bench_B(), testutil::bench_x0());
    Feedback fb = make_feedback(sys, testutil::bench_K());
    const double lam = 2.18;
    const Matrix P = synthesize_P(sys, fb, lam);
    const Matrix F = sys.A - sys.B * fb.K;
    const Matrix Fs = F + 0.5 * lam * Matrix::Identity(3, 3);
    CHECK((Fs.transpose() * P + P * Fs + Matrix::Identity(3, 3)).norm() <= 1e-8);
    CHECK(is_positive_definite(P));
    // M + lam*P = -I by construction of the shifted equation
    const Matrix M = F.transpose() * P + P * F;
    CHECK((M + lam * P + Matrix::Identity(3, 3)).norm() <= 1e-8);
    CHECK_THROWS_AS(synthesize_P(sys, fb, 2.5), CertificateError); // beyond lambda_max
}

TEST_CASE("derivative matrices on a hand-checked 1-d loop") {
    // a - bK = -1, p = 1, bK = 2: M = -2, L = 2, Lambda = 0, Gamma = -2, gamma = 8
    testutil::Loop loop = testutil::scalar_loop();
    CHECK(loop.derivs.M(0, 0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(loop.derivs.L(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(loop.derivs.Lambda(0, 0) == doctest::Approx(0.0));
    CHECK(loop.derivs.Gamma(0, 0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(loop.derivs.gamma(0, 0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("evaluate_plf matches the quadratic form at the benchmark start") {
    testutil::Loop loop = testutil::bench_loop();
    const AugmentedState st = reset_event_state(loop.sys.x0, 0.0);
    const PlfValue v = evaluate_plf(loop.cert, loop.derivs, st);
    CHECK(v.V == doctest::Approx(107857.2).epsilon(1e-12));
    CHECK(loop.cert.W0 == doctest::Approx(1.3 * 107857.2).epsilon(1e-12));
}

TEST_CASE("plf derivatives agree with finite differences along the flow") {
    testutil::Loop loop = testutil::bench_loop();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> dtd(0.01, 0.6);
    for (int trial = 0; trial < 25; ++trial) {
        Vector x(3);
        for (int i = 0; i < 3; ++i) x(i) = u(rng);
        if (x.norm() < 0.1) continue;
        const AugmentedState ev = reset_event_state(x, 0.0);
        const double t = dtd(rng);
        const auto V_at = [&](double tt) {
            return evaluate_plf(loop.cert, loop.derivs, propagate(loop.dyn, ev, tt)).V;
        };
        const auto dV_at = [&](double tt) {
            return evaluate_plf(loop.cert, loop.derivs, propagate(loop.dyn, ev, tt)).dV;
        };
        const PlfValue at = evaluate_plf(loop.cert, loop.derivs, propagate(loop.dyn, ev, t));
        const double h = 1e-6;
        const double fd1 = (V_at(t + h) - V_at(t - h)) / (2.0 * h);
        const double fd2 = (dV_at(t + h) - dV_at(t - h)) / (2.0 * h);
        CHECK(std::abs(at.dV - fd1) <= 1e-6 * std::max({std::abs(at.dV), at.V, 1.0}));
        CHECK(std::abs(at.d2V - fd2) <= 1e-5 * std::max({std::abs(at.d2V), std::abs(at.dV), 1.0}));
    }
}

TEST_CASE("threshold segment value and slope") {
    const ThresholdSegment seg{10.0, 2.0, 0.5};
    CHECK(seg.value(2.0) == doctest::Approx(10.0));
    CHECK(seg.value(4.0) == doctest::Approx(10.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(seg.slope(2.0) == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(seg.slope(4.0) == doctest::Approx(-0.5 * seg.value(4.0)).epsilon(1e-12));
}

TEST_CASE("evaluate_gap is threshold minus plf with matching slope") {
    testutil::Loop loop = testutil::bench_loop();
    const AugmentedState ev = reset_event_state(loop.sys.x0, 0.0);
    const ThresholdSegment seg{loop.cert.W0, 0.0, loop.cert.alpha};
    const GapValue g0 = evaluate_gap(seg, loop.cert, loop.derivs, loop.dyn, ev, 0.0);
    CHECK(g0.Z == doctest::Approx(loop.cert.W0 - 107857.2).epsilon(1e-12));
    const double t = 0.2, h = 1e-6;
    const auto Z_at = [&](double tt) {
        return evaluate_gap(seg, loop.cert, loop.derivs, loop.dyn, ev, tt).Z;
    };
    const GapValue g = evaluate_gap(seg, loop.cert, loop.derivs, loop.dyn, ev, t);
    const double fd = (Z_at(t + h) - Z_at(t - h)) / (2.0 * h);
    CHECK(std::abs(g.dZ - fd) <= 1e-6 * std::max(std::abs(g.dZ), 1.0));
    CHECK_THROWS_AS(evaluate_gap(seg, loop.cert, loop.derivs, loop.dyn, ev, -0.1),
                    std::invalid_argument);
}

TEST_CASE("make_certificate validates alpha against lambda_max") {
    LtiSystem sys = make_lti(testutil::bench_A(), testutil::bench_B(), testutil::bench_x0());
    Feedback fb = make_feedback(sys, testutil::bench_K());
    const W0Spec w0{W0Spec::Kind::multiplier, 1.3};
    CHECK_THROWS_AS(make_certificate(sys, fb, 2.29, testutil::bench_P(), w0), CertificateError);
    CHECK_THROWS_AS(make_certificate(sys, fb, 0.0, testutil::bench_P(), w0), CertificateError);
    CHECK_THROWS_AS(make_certificate(sys, fb, -1.0, testutil::bench_P(), w0), CertificateError);
    CHECK_NOTHROW(make_certificate(sys, fb, 2.18, testutil::bench_P(), w0));
}

TEST_CASE("make_certificate rejects a P that cannot certify the decay") {
    testutil::Loop loop = testutil::integrator_loop();
    // P = I fails eig(M + alpha P) <= 0.1*||P|| for the integrator loop
    CHECK_THROWS_AS(make_certificate(loop.sys, loop.fb, 0.8, Matrix::Identity(2, 2),
                                     W0Spec{W0Spec::Kind::multiplier, 1.3}),
                    CertificateError);
    // non-positive-definite P
    Matrix Pneg = -testutil::bench_P();
    LtiSystem sys = make_lti(testutil::bench_A(), testutil::bench_B(), testutil::bench_x0());
    Feedback fb = make_feedback(sys, testutil::bench_K());
    CHECK_THROWS_AS(make_certificate(sys, fb, 2.18, Pneg,
                                     W0Spec{W0Spec::Kind::multiplier, 1.3}),
                    CertificateError);
}

TEST_CASE("make_certificate resolves the initial threshold") {
    LtiSystem sys = make_lti(testutil::bench_A(), testutil::bench_B(), testutil::bench_x0());
    Feedback fb = make_feedback(sys, testutil::bench_K());
    const PlfCertificate mult =
        make_certificate(sys, fb, 2.18, testutil::bench_P(), {W0Spec::Kind::multiplier, 1.3});
    CHECK(mult.W0 == doctest::Approx(1.3 * 107857.2).epsilon(1e-12));
    CHECK_FALSE(mult.synthesized);

    const PlfCertificate abs =
        make_certificate(sys, fb, 2.18, testutil::bench_P(), {W0Spec::Kind::absolute, 120000.0});
    CHECK(abs.W0 == 120000.0);

    CHECK_THROWS_AS(make_certificate(sys, fb, 2.18, testutil::bench_P(),
                                     W0Spec{W0Spec::Kind::multiplier, 0.9}),
                    CertificateError);
    CHECK_THROWS_AS(make_certificate(sys, fb, 2.18, testutil::bench_P(),
                                     W0Spec{W0Spec::Kind::absolute, 100000.0}),
                    CertificateError); // below V(x0)
}

TEST_CASE("synthesized path flags and certifies tightly") {
    testutil::Loop loop = testutil::integrator_loop();
    CHECK(loop.cert.synthesized);
    const Matrix F = loop.sys.A - loop.sys.B * loop.fb.K;
    const Matrix M = F.transpose() * loop.cert.P + loop.cert.P * F;
    CHECK(max_real_eigenvalue(M + loop.cert.alpha * loop.cert.P) <= 1e-8);
}

} // TEST_SUITE
