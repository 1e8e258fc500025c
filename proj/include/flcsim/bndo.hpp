#pragma once

#include "flcsim/plant.hpp"

namespace flcsim {

struct BndoGains {
    double l1 = 5.0;
    double l2 = 0.0;
};

/**
 * @brief Basic nonlinear disturbance observer state.
 *
 *   p'    = -l z p - l (z l x + g1(x) + g2(x) u)
 *   d_hat = p + l x
 *
 * x_meas is the measurement the estimate was formed from; the next update
 * integrates p across the interval between it and the new measurement.
 */
struct BndoState {
    double p = 0.0;
    double d_hat = 0.0;
    BndoGains gains;
    PlantState x_meas;

    /// Throws std::invalid_argument unless l1 > 0. p is chosen so that
    /// d_hat(0) = d_hat0.
    static BndoState init(const BndoGains& gains, const PlantState& x0, double d_hat0 = 0.0);

    double lx(const PlantState& x) const noexcept { return gains.l1 * x.x1 + gains.l2 * x.x2; }
};

/// Right-hand side of the internal-state equation.
double bndo_p_rate(double p, const PlantState& x, double u, const BndoGains& gains,
                   const PlantModel& model);

/**
 * Advances p across one sampling interval of length dt during which u was
 * applied, then re-forms d_hat = p + l x_now. Only measurements and the
 * applied input are used. With RK4 the state inside the interval is the
 * linear interpolation of the two samples; Euler uses the earlier sample.
 */
BndoState bndo_update(const BndoState& obs, const PlantState& x_now, double u,
                      const PlantModel& model, double dt, Scheme scheme = Scheme::RK4);

/// Backward difference (d_hat_now - d_hat_prev) / dt.
double bndo_rate(const BndoState& prev, const BndoState& now, double dt);

}  // namespace flcsim
