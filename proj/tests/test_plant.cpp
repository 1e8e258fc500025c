#include <doctest.h>

#include <cmath>
#include <cstring>

#include "flcsim/plant.hpp"

using namespace flcsim;

namespace {
// Independent evaluation of the benchmark drift.
double drift(double x1, double x2) { return -x1 - x2 + 0.3 * std::cos(x1) + std::exp(x1); }
}  // namespace

TEST_CASE("step disturbance is active inside its window") {
    const DisturbanceProfile step = StepDisturbance{0.5, 20.0, 40.0};
    CHECK(eval_disturbance(step, 30.0) == 0.5);
    CHECK(eval_disturbance(step, 20.0) == 0.5);
    CHECK(eval_disturbance(step, 19.999) == 0.0);
    CHECK(eval_disturbance(step, 40.0) == 0.0);
}

TEST_CASE("zero profile") { CHECK(eval_disturbance(ZeroDisturbance{}, 10.0) == 0.0); }

TEST_CASE("multi-sine evaluates the offset plus sine sum in radians") {
    const DisturbanceProfile ms = MultiSineDisturbance{0.25, {0.15, 0.15}, {0.5, 1.5}, 40.0, 60.0};
    CHECK(eval_disturbance(ms, 40.0) == doctest::Approx(0.25 + 0.15 * (std::sin(20.0) + std::sin(60.0))).epsilon(1e-15));
    CHECK(eval_disturbance(ms, 39.0) == 0.0);
    CHECK(eval_disturbance(ms, 60.0) == 0.0);
}

TEST_CASE("three-phase timeline") {
    const DisturbanceProfile d = three_phase_disturbance();
    CHECK(eval_disturbance(d, 0.0) == 0.0);
    CHECK(eval_disturbance(d, 19.999) == 0.0);
    CHECK(eval_disturbance(d, 25.0) == 0.5);
    const double t = 50.0;
    CHECK(eval_disturbance(d, t) == doctest::Approx(0.25 + 0.15 * (std::sin(0.5 * t) + std::sin(1.5 * t))));
    CHECK(eval_disturbance(d, 1e4) == doctest::Approx(0.25 + 0.15 * (std::sin(5e3) + std::sin(1.5e4))));
}

TEST_CASE("disturbance evaluation is deterministic") {
    const DisturbanceProfile d = three_phase_disturbance();
    for (double t = 0.0; t < 60.0; t += 0.37) {
        const double a = eval_disturbance(d, t), b = eval_disturbance(d, t);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}

TEST_CASE("profile validation") {
    CHECK_NOTHROW(validate(three_phase_disturbance()));
    CHECK_THROWS_AS(validate(MultiSineDisturbance{0.0, {1.0}, {1.0, 2.0}, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(StepDisturbance{1.0, 5.0, 2.0}), std::invalid_argument);
    PiecewiseDisturbance overlap{{{0.0, 10.0, StepDisturbance{1.0}}, {5.0, 20.0, ZeroDisturbance{}}}};
    CHECK_THROWS_AS(validate(overlap), std::invalid_argument);
    PiecewiseDisturbance unordered{{{10.0, 20.0, ZeroDisturbance{}}, {0.0, 5.0, ZeroDisturbance{}}}};
    CHECK_THROWS_AS(validate(unordered), std::invalid_argument);
}

TEST_CASE("plant derivatives of the benchmark model") {
    const PlantModel m = PlantModel::benchmark();
    auto d0 = plant_derivatives({0, 0}, 0.0, 0.0, m);
    CHECK(d0.dx1 == 0.0);
    CHECK(d0.dx2 == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(plant_derivatives({1, 1}, 0.0, 0.5, m).dx1 == 1.5);
    auto d1 = plant_derivatives({1, 1}, 0.0, 0.0, m);
    CHECK(d1.dx1 == 1.0);
    CHECK(d1.dx2 == doctest::Approx(-1 - 1 + 0.3 * std::cos(1.0) + std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("plant derivatives are affine in u") {
    const PlantModel m = PlantModel::benchmark();
    const PlantState x{0.3, -0.7};
    const double u1 = 1.7, u2 = -4.1, d = 0.2;
    const auto a = plant_derivatives(x, u1, d, m), b = plant_derivatives(x, u2, d, m),
               c = plant_derivatives(x, 0.5 * (u1 + u2), d, m);
    CHECK(a.dx1 + b.dx1 - 2 * c.dx1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(a.dx2 + b.dx2 - 2 * c.dx2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(c.dx2 == doctest::Approx(drift(0.3, -0.7) + 0.5 * (u1 + u2)));
}

TEST_CASE("non-finite derivatives are a hard error naming the term") {
    const PlantModel m = PlantModel::benchmark();
    try {
        plant_derivatives({800.0, 0.0}, 0.0, 0.0, m);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("drift") != std::string::npos);
    }
    CHECK_THROWS_AS(plant_derivatives({0, 0}, 0.0, NAN, m), NumericalError);
}

TEST_CASE("disturbance channel is fixed to the first state") {
    CHECK(PlantModel::disturbance_channel[0] == 1.0);
    CHECK(PlantModel::disturbance_channel[1] == 0.0);
}

TEST_CASE("Euler step") {
    const PlantState x = integrate_step({1, 1}, {1.5, 0.3}, 0.001);
    CHECK(x.x1 == doctest::Approx(1.0015).epsilon(1e-15));
    CHECK(x.x2 == doctest::Approx(1.0003).epsilon(1e-15));
    const PlantState still = integrate_step({0.4, -2.0}, {0.0, 0.0}, 0.01);
    CHECK(still.x1 == 0.4);
    CHECK(still.x2 == -2.0);
}

TEST_CASE("RK4 step on exponential decay") {
    auto f = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{-y[0]}; };
    const auto y = integrate_step<1>({1.0}, f, 0.0, 0.001, Scheme::RK4);
    CHECK(std::abs(y[0] - std::exp(-0.001)) < 1e-12);
}

TEST_CASE("linear decay: Euler is the exact power, RK4 tracks the exponential") {
    const double lambda = 2.0, dt = 0.005;  // lambda dt = 0.01
    const int n = 1000;
    auto f = [&](double, const std::array<double, 1>& y) { return std::array<double, 1>{-lambda * y[0]}; };
    std::array<double, 1> e{1.0}, r{1.0};
    double power = 1.0;
    for (int k = 0; k < n; ++k) {
        e = integrate_step<1>(e, f, k * dt, dt, Scheme::Euler);
        r = integrate_step<1>(r, f, k * dt, dt, Scheme::RK4);
        power *= 1.0 - lambda * dt;
    }
    // Same product up to the rounding of y + dt f versus y (1 - lambda dt).
    CHECK(e[0] == doctest::Approx(power).epsilon(1e-12));
    CHECK(std::abs(r[0] - std::exp(-lambda * n * dt)) < 1e-10);
}

TEST_CASE("RK4 samples time-varying inputs at stage times") {
    // y' = cos t has y(T) = sin T. RK4 reduces to Simpson's rule here, with
    // global error about dt^4 / 2880 = 3.5e-12; freezing t would cost ~5e-3.
    auto f = [](double t, const std::array<double, 1>&) { return std::array<double, 1>{std::cos(t)}; };
    std::array<double, 1> y{0.0};
    const double dt = 0.01;
    for (int k = 0; k < 100; ++k) y = integrate_step<1>(y, f, k * dt, dt, Scheme::RK4);
    CHECK(std::abs(y[0] - std::sin(1.0)) < 1e-11);
}

TEST_CASE("scheme names") {
    CHECK(scheme_from_string("euler") == Scheme::Euler);
    CHECK(scheme_from_string("rk4") == Scheme::RK4);
    CHECK(to_string(Scheme::RK4) == "rk4");
    CHECK_THROWS_AS(scheme_from_string("midpoint"), std::invalid_argument);
    CHECK_THROWS(plant_by_name("pendulum"));
}
