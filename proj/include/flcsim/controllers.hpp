#pragma once

#include <string>

#include "flcsim/plant.hpp"

namespace flcsim {

enum class ControllerVariant { Flc, FlcI, FlcBndo, FlcSldo };

ControllerVariant variant_from_string(const std::string& name);
/// Short CLI names: flc, flci, bndo, sldo.
std::string to_string(ControllerVariant variant);

class ControllerGains {
public:
    /// Throws std::invalid_argument unless k1 > 0, k2 > 0 and ki >= 0.
    ControllerGains(double k1, double k2, double ki = 0.0);

    double k1() const noexcept { return k1_; }
    double k2() const noexcept { return k2_; }
    double ki() const noexcept { return ki_; }

private:
    double k1_;
    double k2_;
    double ki_;
};

/// Integral of x1, only advanced for FLC-I.
struct ControllerState {
    ControllerVariant variant = ControllerVariant::Flc;
    double integral_x1 = 0.0;
};

// Every law below evaluates u = -b^-1(x) (a(x) + ...) and throws NumericalError
// when b(x) is zero or non-finite.

double flc_control(const PlantState& x, const ControllerGains& gains, const PlantModel& model);

struct FlciOutput {
    double u;
    ControllerState next;
};

/// u uses the integral accumulated so far; the returned state has
/// integral += x1 dt (rectangle rule).
FlciOutput flci_control(const PlantState& x, const ControllerState& state,
                        const ControllerGains& gains, const PlantModel& model, double dt);

double flc_bndo_control(const PlantState& x, double d_hat, const ControllerGains& gains,
                        const PlantModel& model);

double flc_sldo_control(const PlantState& x, double d_hat_sl, double d_hat_sl_rate,
                        const ControllerGains& gains, const PlantModel& model);

/// Closed-loop x1 equilibrium under a constant disturbance: k2 d / k1 for FLC,
/// zero for the three disturbance-compensating variants.
double predict_steady_state_x1(ControllerVariant variant, const ControllerGains& gains,
                               double d_const);

}  // namespace flcsim
