#include "flcsim/controllers.hpp"

#include <cmath>
#include <stdexcept>

namespace flcsim {

ControllerVariant variant_from_string(const std::string& name) {
    if (name == "flc") return ControllerVariant::Flc;
    if (name == "flci" || name == "flc-i") return ControllerVariant::FlcI;
    if (name == "bndo" || name == "flc-bndo") return ControllerVariant::FlcBndo;
    if (name == "sldo" || name == "flc-sldo") return ControllerVariant::FlcSldo;
    throw std::invalid_argument("unknown controller variant '" + name +
                                "' (expected flc|flci|bndo|sldo)");
}

std::string to_string(ControllerVariant variant) {
    switch (variant) {
        case ControllerVariant::Flc: return "flc";
        case ControllerVariant::FlcI: return "flci";
        case ControllerVariant::FlcBndo: return "bndo";
        case ControllerVariant::FlcSldo: return "sldo";
    }
    return "?";
}

ControllerGains::ControllerGains(double k1, double k2, double ki) : k1_(k1), k2_(k2), ki_(ki) {
    if (!(k1 > 0.0) || !(k2 > 0.0))
        throw std::invalid_argument("controller gains k1 and k2 must be positive");
    if (!(ki >= 0.0)) throw std::invalid_argument("integral gain ki must be non-negative");
}

namespace {

// -b^-1(x) (a(x) + extra)
double linearize(const PlantState& x, double extra, const PlantModel& model) {
    const double b = model.b(x);
    if (b == 0.0 || !std::isfinite(b))
        throw NumericalError("singular input gain: b(x) = " + std::to_string(b));
    return -(model.a(x) + extra) / b;
}

}  // namespace

double flc_control(const PlantState& x, const ControllerGains& g, const PlantModel& model) {
    return linearize(x, g.k1() * x.x1 + g.k2() * x.x2, model);
}

FlciOutput flci_control(const PlantState& x, const ControllerState& state,
                        const ControllerGains& g, const PlantModel& model, double dt) {
    if (state.variant != ControllerVariant::FlcI)
        throw std::invalid_argument("flci_control called with a non FLC-I controller state");
    if (!(dt > 0.0)) throw std::invalid_argument("flci_control: dt must be positive");
    const double u =
        linearize(x, g.k1() * x.x1 + g.k2() * x.x2 + g.ki() * state.integral_x1, model);
    ControllerState next = state;
    next.integral_x1 += x.x1 * dt;
    return {u, next};
}

double flc_bndo_control(const PlantState& x, double d_hat, const ControllerGains& g,
                        const PlantModel& model) {
    return linearize(x, g.k1() * x.x1 + g.k2() * (x.x2 + d_hat), model);
}

double flc_sldo_control(const PlantState& x, double d_hat_sl, double d_hat_sl_rate,
                        const ControllerGains& g, const PlantModel& model) {
    return linearize(x, g.k1() * x.x1 + g.k2() * (x.x2 + d_hat_sl) + d_hat_sl_rate, model);
}

double predict_steady_state_x1(ControllerVariant variant, const ControllerGains& g,
                               double d_const) {
    // x1'' + k2 x1' + k1 x1 = k2 d for plain FLC; the other laws cancel d.
    if (variant == ControllerVariant::Flc) return g.k2() * d_const / g.k1();
    return 0.0;
}

}  // namespace flcsim
