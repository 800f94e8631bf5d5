#include "selftrig/errors.hpp"
#include "selftrig/scalar_system.hpp"
#include "selftrig/verify.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace selftrig;

TEST_SUITE("scalar") {

TEST_CASE("make_scalar_system validates every constraint") {
    CHECK_NOTHROW(make_scalar_system(1.0, 1.0, 1.0, 2.0, 1.0, 1.0));
    CHECK_THROWS_AS(make_scalar_system(0.0, 1.0, 1.0, 2.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_scalar_system(1.0, 0.0, 1.0, 2.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_scalar_system(1.0, 1.0, 0.0, 2.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_scalar_system(1.0, 1.0, 1.0, 2.0, -1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_scalar_system(1.0, 1.0, 1.0, 2.0, 1.0, 0.0), ConfigError);
    // unstable closed loop: a - bK >= 0
    CHECK_THROWS_AS(make_scalar_system(1.0, 1.0, 1.0, 0.5, 1.0, 1.0), ConfigError);
    // margin violated: 2p(a - bK) = -2 but q = 3
    CHECK_THROWS_AS(make_scalar_system(1.0, 1.0, 1.0, 2.0, 1.0, 3.0), ConfigError);
}

TEST_CASE("scalar_state matches the augmented propagation") {
    const ScalarSystem ssys = make_scalar_system(1.0, 1.0, 1.0, 2.0, 1.0, 1.0);
    testutil::Loop loop = testutil::scalar_loop();
    const AugmentedState ev = reset_event_state(loop.sys.x0, 0.5);
    for (double dt : {0.0, 0.1, 0.4, 1.0, 2.5}) {
        const AugmentedState at = propagate(loop.dyn, ev, dt);
        const double closed = scalar_state(ssys, loop.sys.x0(0), 0.5, 0.5 + dt);
        CHECK(at.xi(0) == doctest::Approx(closed).epsilon(1e-10));
    }
    CHECK_THROWS_AS(scalar_state(ssys, 1.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("analytic minimizer offset in both sign cases") {
    // a > 0: ratio 2/(2-1) = 2, offset ln(2)/1
    const ScalarSystem pos = make_scalar_system(1.0, 1.0, 1.0, 2.0, 1.0, 1.0);
    CHECK(rho_k_analytic(pos, 3.0) == doctest::Approx(3.0 + std::log(2.0)).epsilon(1e-14));
    // a < 0: ratio 1/(1+1) = 1/2, offset ln(1/2)/(-1) = ln 2
    const ScalarSystem neg = make_scalar_system(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(rho_k_analytic(neg, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // the offset is where the held-loop state crosses zero
    CHECK(scalar_state(pos, 5.0, 0.0, std::log(2.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("invalid gain case is reported, not silently misused") {
    // a < 0 with bK < 0: ratio negative, no stationary point after t_k
    const ScalarSystem bad = make_scalar_system(-1.0, 0.5, 1.0, -1.0, 1.0, 0.5);
    const GainValidity v = validate_gain(bad);
    CHECK_FALSE(v.valid);
    CHECK_FALSE(v.a_positive);
    CHECK(v.ratio < 0.0);
    CHECK_THROWS_AS(rho_k_analytic(bad, 0.0), std::logic_error);
}

TEST_CASE("gain validity fields for the healthy case") {
    const ScalarSystem s = make_scalar_system(1.0, 1.0, 1.0, 2.0, 1.0, 1.0);
    const GainValidity v = validate_gain(s);
    CHECK(v.valid);
    CHECK(v.a_positive);
    CHECK(v.ratio == doctest::Approx(2.0));
    CHECK(v.rho_after_tk);
}

TEST_CASE("numeric minimizer matches the closed form across random draws") {
    std::mt19937_64 rng(99);
    const SolverParams params;
    int tested = 0;
    while (tested < 10) {
        RandomLoop loop = random_stable_loop(rng);
        if (loop.sys.n() != 1) continue;
        ++tested;
        const PreparedRun run = prepare_loop(loop, params, SimConfig{});
        const ScalarSystem ssys = scalar_from_run(run, ScalarExtras{});
        const ScalarReport rep = scalar_crosscheck(run, ssys, 3);
        REQUIRE(rep.validity.valid);
        CHECK(rep.worst_delta <= std::max(params.tol1, 1e-6));
        // the offset is state-independent: identical at every event
        for (const auto& e : rep.events)
            CHECK(std::abs(e.rho_offset - rep.analytic_offset) <=
                  2.0 * std::max(params.tol1, 1e-6));
    }
}

TEST_CASE("scalar_from_run pulls fields and defaults q") {
    testutil::Loop loop = testutil::scalar_loop();
    const PreparedRun run{loop.sys, loop.fb, loop.cert, loop.derivs, loop.dyn,
                          SolverParams{}, SimConfig{}};
    const ScalarSystem ssys = scalar_from_run(run, ScalarExtras{});
    CHECK(ssys.a == 1.0);
    CHECK(ssys.b == 1.0);
    CHECK(ssys.K == 2.0);
    CHECK(ssys.p == 1.0);
    CHECK(ssys.q == doctest::Approx(1.0)); // p*|a - bK|
    CHECK(ssys.c == 1.0);
}

} // TEST_SUITE
