#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace flcsim {

/// Raised when a step produces NaN/Inf or a control law hits a singular gain.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::size_t step = npos)
        : std::runtime_error(what), step_(step) {}

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

struct PlantState {
    double x1 = 0.0;
    double x2 = 0.0;

    bool finite() const noexcept { return std::isfinite(x1) && std::isfinite(x2); }
};

struct PlantDerivatives {
    double dx1 = 0.0;
    double dx2 = 0.0;
};

/**
 * @brief Second-order plant with the disturbance entering the x1 channel.
 *
 *   x1' = x2 + d
 *   x2' = a(x) + b(x) u
 *
 * The disturbance channel z = [1, 0] is fixed by the structure above and is
 * not configurable.
 */
class PlantModel {
public:
    using Term = std::function<double(const PlantState&)>;

    PlantModel(std::string name, Term drift, Term gain)
        : name_(std::move(name)), drift_(std::move(drift)), gain_(std::move(gain)) {}

    /// a(x) = -x1 - x2 + 0.3 cos(x1) + exp(x1), b(x) = 1.
    static PlantModel benchmark();
    /// a(x) = 0, b(x) = 1. Closed loops reduce to linear ODEs with known solutions.
    static PlantModel double_integrator();

    const std::string& name() const noexcept { return name_; }
    double a(const PlantState& x) const { return drift_(x); }
    double b(const PlantState& x) const { return gain_(x); }

    static constexpr std::array<double, 2> disturbance_channel{1.0, 0.0};

private:
    std::string name_;
    Term drift_;
    Term gain_;
};

/// Looks up a built-in model by name ("benchmark", "double_integrator").
PlantModel plant_by_name(const std::string& name);

// ---------------------------------------------------------------------------
// Disturbance profiles. Every window is half-open [t_on, t_off); t_off may be
// +infinity.

struct ZeroDisturbance {};

struct StepDisturbance {
    double magnitude = 0.0;
    double t_on = 0.0;
    double t_off = std::numeric_limits<double>::infinity();
};

struct MultiSineDisturbance {
    double offset = 0.0;
    std::vector<double> amplitudes;
    std::vector<double> frequencies;  // rad/s
    double t_on = 0.0;
    double t_off = std::numeric_limits<double>::infinity();
};

using LeafDisturbance = std::variant<ZeroDisturbance, StepDisturbance, MultiSineDisturbance>;

struct DisturbanceSegment {
    double t_start = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
    LeafDisturbance profile;
};

/// Ordered, non-overlapping segments; outside every segment the value is 0.
struct PiecewiseDisturbance {
    std::vector<DisturbanceSegment> segments;
};

using DisturbanceProfile =
    std::variant<ZeroDisturbance, StepDisturbance, MultiSineDisturbance, PiecewiseDisturbance>;

/// Throws std::invalid_argument on mismatched multi-sine lists, inverted
/// windows or overlapping / unordered piecewise segments.
void validate(const DisturbanceProfile& profile);

double eval_disturbance(const DisturbanceProfile& profile, double t);

/// The three-phase timeline: zero on [0,20), step 0.5 on [20,40),
/// 0.25 + 0.15 (sin 0.5t + sin 1.5t) from t = 40 on.
DisturbanceProfile three_phase_disturbance();

// ---------------------------------------------------------------------------

/// (x1', x2') = (x2 + d, a(x) + b(x) u). Throws NumericalError naming the
/// offending term when anything is non-finite.
PlantDerivatives plant_derivatives(const PlantState& x, double u, double d,
                                   const PlantModel& model);

enum class Scheme { Euler, RK4 };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme scheme);

/// One forward-Euler step with precomputed derivatives.
PlantState integrate_step(const PlantState& x, const PlantDerivatives& derivs, double dt);

/**
 * One fixed step of y' = f(t, y). Inputs held by the caller (control, observer
 * signals) stay constant across the RK4 stages; f sees the stage time so
 * exogenous signals are sampled where they occur.
 */
template <std::size_t N, typename Rhs>
std::array<double, N> integrate_step(const std::array<double, N>& y, Rhs&& f, double t,
                                     double dt, Scheme scheme) {
    using Vec = std::array<double, N>;
    auto axpy = [](const Vec& base, const Vec& slope, double h) {
        Vec out;
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + h * slope[i];
        return out;
    };

    if (scheme == Scheme::Euler) return axpy(y, f(t, y), dt);

    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * dt, axpy(y, k1, 0.5 * dt));
    const Vec k3 = f(t + 0.5 * dt, axpy(y, k2, 0.5 * dt));
    const Vec k4 = f(t + dt, axpy(y, k3, dt));
    Vec out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace flcsim
