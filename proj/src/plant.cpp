#include "flcsim/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace flcsim {

PlantModel PlantModel::benchmark() {
    return PlantModel(
        "benchmark",
        [](const PlantState& x) {
            return -x.x1 - x.x2 + 0.3 * std::cos(x.x1) + std::exp(x.x1);
        },
        [](const PlantState&) { return 1.0; });
}

PlantModel PlantModel::double_integrator() {
    return PlantModel(
        "double_integrator", [](const PlantState&) { return 0.0; },
        [](const PlantState&) { return 1.0; });
}

PlantModel plant_by_name(const std::string& name) {
    if (name == "benchmark") return PlantModel::benchmark();
    if (name == "double_integrator") return PlantModel::double_integrator();
    throw std::invalid_argument("unknown plant model '" + name + "'");
}

namespace {

void check_window(double t_on, double t_off, const char* what) {
    if (!(t_on >= 0.0) || !(t_off >= t_on))
        throw std::invalid_argument(std::string(what) + ": window must satisfy 0 <= t_on <= t_off");
}

void validate_leaf(const LeafDisturbance& leaf) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, StepDisturbance>) {
                check_window(p.t_on, p.t_off, "step disturbance");
            } else if constexpr (std::is_same_v<T, MultiSineDisturbance>) {
                check_window(p.t_on, p.t_off, "multi-sine disturbance");
                if (p.amplitudes.size() != p.frequencies.size())
                    throw std::invalid_argument(
                        "multi-sine disturbance: amplitudes and frequencies differ in length");
            }
        },
        leaf);
}

bool active(double t, double t_on, double t_off) { return t >= t_on && t < t_off; }

double eval_leaf(const LeafDisturbance& leaf, double t) {
    return std::visit(
        [t](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ZeroDisturbance>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, StepDisturbance>) {
                return active(t, p.t_on, p.t_off) ? p.magnitude : 0.0;
            } else {
                if (!active(t, p.t_on, p.t_off)) return 0.0;
                double sum = 0.0;
                for (std::size_t k = 0; k < p.amplitudes.size(); ++k)
                    sum += p.amplitudes[k] * std::sin(p.frequencies[k] * t);
                return p.offset + sum;
            }
        },
        leaf);
}

}  // namespace

void validate(const DisturbanceProfile& profile) {
    if (const auto* pw = std::get_if<PiecewiseDisturbance>(&profile)) {
        double last_end = 0.0;
        for (std::size_t i = 0; i < pw->segments.size(); ++i) {
            const auto& seg = pw->segments[i];
            check_window(seg.t_start, seg.t_end, "piecewise segment");
            if (i > 0 && seg.t_start < last_end)
                throw std::invalid_argument("piecewise segments overlap or are out of order");
            last_end = seg.t_end;
            validate_leaf(seg.profile);
        }
        return;
    }
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (!std::is_same_v<T, PiecewiseDisturbance>) validate_leaf(LeafDisturbance{p});
        },
        profile);
}

double eval_disturbance(const DisturbanceProfile& profile, double t) {
    if (const auto* pw = std::get_if<PiecewiseDisturbance>(&profile)) {
        for (const auto& seg : pw->segments)
            if (active(t, seg.t_start, seg.t_end)) return eval_leaf(seg.profile, t);
        return 0.0;
    }
    return std::visit(
        [t](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PiecewiseDisturbance>) {
                return 0.0;  // handled above
            } else {
                return eval_leaf(LeafDisturbance{p}, t);
            }
        },
        profile);
}

DisturbanceProfile three_phase_disturbance() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    PiecewiseDisturbance pw;
    pw.segments.push_back({20.0, 40.0, StepDisturbance{0.5, 20.0, 40.0}});
    pw.segments.push_back(
        {40.0, inf, MultiSineDisturbance{0.25, {0.15, 0.15}, {0.5, 1.5}, 40.0, inf}});
    return pw;
}

PlantDerivatives plant_derivatives(const PlantState& x, double u, double d,
                                   const PlantModel& model) {
    const double a = model.a(x);
    const double b = model.b(x);
    if (!std::isfinite(a)) throw NumericalError("plant drift a(x) is not finite");
    if (!std::isfinite(b)) throw NumericalError("plant input gain b(x) is not finite");
    if (!std::isfinite(u)) throw NumericalError("control input u is not finite");
    if (!std::isfinite(d)) throw NumericalError("disturbance d is not finite");

    PlantDerivatives out{x.x2 + d, a + b * u};
    if (!std::isfinite(out.dx1)) throw NumericalError("x1 derivative (x2 + d) is not finite");
    if (!std::isfinite(out.dx2)) throw NumericalError("x2 derivative (a + b u) is not finite");
    return out;
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "euler") return Scheme::Euler;
    if (name == "rk4") return Scheme::RK4;
    throw std::invalid_argument("unknown integration scheme '" + name + "' (expected euler|rk4)");
}

std::string to_string(Scheme scheme) { return scheme == Scheme::Euler ? "euler" : "rk4"; }

PlantState integrate_step(const PlantState& x, const PlantDerivatives& derivs, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be positive");
    PlantState next{x.x1 + dt * derivs.dx1, x.x2 + dt * derivs.dx2};
    if (!next.finite()) throw NumericalError("integration step produced a non-finite state");
    return next;
}

}  // namespace flcsim
