#include <doctest.h>

#include <cmath>

#include "flcsim/simulation.hpp"
#include "flcsim/sldo.hpp"

using namespace flcsim;

TEST_CASE("difference inputs") {
    auto [a1, a2] = sldo_inputs(0.3, 0.3, 0.3, 0.001);
    CHECK(a1 == 0.0);
    CHECK(a2 == 0.0);
    auto [b1, b2] = sldo_inputs(0.002, 0.001, 0.000, 0.001);
    CHECK(b1 == doctest::Approx(1.0));
    CHECK(std::abs(b2) < 1e-9);
    CHECK_THROWS(sldo_inputs(0, 0, 0, 0.0));

    // Sampled BNDO response 0.5 (1 - e^-5t): first difference tracks 2.5 e^-5t.
    const double dt = 0.001, t = 0.1;
    auto d = [](double tt) { return 0.5 * (1.0 - std::exp(-5.0 * tt)); };
    auto [c1, c2] = sldo_inputs(d(t), d(t - dt), d(t - 2 * dt), dt);
    CHECK(c1 == doctest::Approx(2.5 * std::exp(-0.5)).epsilon(0.03));
    CHECK(c2 == doctest::Approx(-12.5 * std::exp(-0.5)).epsilon(0.03));
}

TEST_CASE("conventional estimation law") {
    CHECK(sldo_tau_c(0.0, 0.0, 10.0) == 0.0);
    CHECK(sldo_tau_c(1.0, 0.0, 10.0) == 1.0);
    CHECK(sldo_tau_c(1.0, -0.2, 10.0) == doctest::Approx(-1.0));
}

TEST_CASE("sliding surface") {
    CHECK(sliding_surface(0.0, 0.0, 5.0) == 0.0);
    CHECK(sliding_surface(1.0, 0.5, 5.0) == doctest::Approx(1.1));
    for (double x1 : {-2.0, 0.3, 7.0})
        for (double x2 : {-1.5, 0.0, 0.8}) {
            const double eta = 10.0, l1 = 5.0;
            CHECK(sliding_surface(sldo_tau_c(x1, x2, eta), x2, l1) ==
                  doctest::Approx((eta + 1.0 / l1) * x2 + x1).epsilon(1e-14));
        }
    CHECK_THROWS_AS(sliding_surface(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("state construction") {
    CHECK_THROWS_AS(SldoState::init(0.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(SldoState::init(10.0, -1.0), std::invalid_argument);
    const SldoState s = SldoState::init(10.0, 5.0);
    CHECK(s.d_hat_sl == 0.0);
    CHECK_FALSE(s.inputs_ready());
}

TEST_CASE("quiescent fixed point") {
    SldoState s = SldoState::init(10.0, 5.0);
    T2nfsParams p = T2nfsParams::make(3, 3, 0.03);
    const T2nfsParams p0 = p;
    for (int k = 0; k < 1000; ++k) {
        auto u = sldo_update(s, 0.0, p, 0.001);
        s = u.state;
        p = u.params;
        CHECK(s.tau_c == 0.0);
        CHECK(s.tau_n == 0.0);
        CHECK(s.d_hat_sl == 0.0);
    }
    CHECK(p == p0);
}

TEST_CASE("inputs stay zero during the differencing warm-up") {
    SldoState s = SldoState::init(10.0, 5.0);
    const T2nfsParams p = T2nfsParams::make(3, 3, 0.03);
    s = sldo_update(s, 0.1, p, 0.001).state;
    CHECK(s.xi1 == 0.0);
    s = sldo_update(s, 0.2, p, 0.001).state;
    CHECK(s.xi1 == 0.0);
    CHECK(s.xi2 == 0.0);
    s = sldo_update(s, 0.4, p, 0.001).state;
    CHECK(s.xi1 == doctest::Approx(200.0));
    CHECK(s.xi2 == doctest::Approx(1e5));
    CHECK(s.xi1_rate == 0.0);
}

TEST_CASE("composition identities after every update") {
    SldoState s = SldoState::init(10.0, 5.0);
    T2nfsParams p = T2nfsParams::make(3, 3, 0.03);
    for (int k = 0; k < 3000; ++k) {
        const double d = 0.5 * (1.0 - std::exp(-5e-3 * k)) + 0.1 * std::sin(0.01 * k);
        auto u = sldo_update(s, d, p, 0.001);
        const SldoState& n = u.state;
        CHECK(n.tau == n.tau_c - n.tau_n);
        CHECK(n.s == n.tau_c + n.xi2 / n.l1);
        CHECK(n.d_hat_sl == s.d_hat_sl + 0.001 * s.tau);
        s = n;
        p = u.params;
    }
}

TEST_CASE("non-finite BNDO input is rejected") {
    const T2nfsParams p = T2nfsParams::make(3, 3, 0.03);
    CHECK_THROWS_AS(sldo_update(SldoState::init(10.0, 5.0), NAN, p, 0.001), NumericalError);
}

TEST_CASE("frozen network reduces to the integrated conventional law") {
    ScenarioConfig c = ScenarioConfig::paper_default();
    c.adapt = false;
    c.horizon = 25.0;
    c.variant = ControllerVariant::FlcBndo;
    const RunTrace tr = run_scenario(c);
    double integral = 0.0;
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
        const auto& r = tr.records[k];
        CHECK(r.tau_n == 0.0);
        CHECK(r.d_hat_sl == integral);
        integral += c.dt * r.tau_c;
    }
}

TEST_CASE("trace satisfies the composition identities exactly") {
    const RunTrace tr = run_scenario(ScenarioConfig::paper_default());
    for (const auto& r : tr.records) {
        REQUIRE(r.tau == r.tau_c - r.tau_n);
    }
}

TEST_CASE("network takes over the estimation signal late in the step phase") {
    const RunTrace tr = run_scenario(ScenarioConfig::paper_default());
    double sc = 0, sn = 0;
    for (const auto& r : tr.records)
        if (r.t >= 39.0 && r.t < 40.0 - 1e-9) {
            sc += std::abs(r.tau_c);
            sn += std::abs(r.tau_n);
        }
    CHECK(sc < 0.05 * sn);
}

// The two properties below describe the intended behaviour of the learning
// observer. The estimation law as specified does not deliver them: the
// conventional term injects eta times the BNDO acceleration at the step
// onset and the network output can only move at 2 alpha per second, so the
// estimate overshoots and drifts. They are kept as expected failures so a
// behavioural change shows up.
TEST_CASE("SLDO estimate settles on the step within two seconds [known divergence]" * doctest::should_fail()) {
    const RunTrace tr = run_scenario(ScenarioConfig::paper_default());
    for (const auto& r : tr.records)
        if (r.t >= 22.0 && r.t < 40.0 - 1e-9) REQUIRE(std::abs(r.d_hat_sl - 0.5) < 0.02);
}

TEST_CASE("surface energy decreases with a fast enough learning rate [known divergence]" * doctest::should_fail()) {
    ScenarioConfig c = ScenarioConfig::paper_default();
    c.alpha = 0.5;
    c.variant = ControllerVariant::FlcBndo;
    const RunTrace tr = run_scenario(c);
    std::size_t steps = 0, ok = 0;
    for (std::size_t k = 1; k < tr.records.size(); ++k) {
        if (tr.records[k].t < 40.0 || tr.records[k].guards) continue;
        ++steps;
        ok += tr.records[k].s * tr.records[k].s <= tr.records[k - 1].s * tr.records[k - 1].s;
    }
    REQUIRE(steps > 0);
    CHECK(static_cast<double>(ok) >= 0.99 * static_cast<double>(steps));
}
