#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "flcsim/t2nfs.hpp"

namespace flcsim {

struct SldoOptions {
    /// false freezes the network, leaving d_hat_sl = integral of tau_c - tau_n(0).
    bool adapt = true;
    AdaptOptions adaptation;
};

/**
 * @brief Self-learning disturbance observer state.
 *
 * Inputs xi1 = d(d_hat_bn)/dt and xi2 = d^2(d_hat_bn)/dt^2 come from backward
 * differences of the BNDO estimate. Each update keeps
 *   tau = tau_c - tau_n      tau_c = xi1 + eta xi2      s = tau_c + xi2 / l1
 * and d_hat_sl integrates tau (forward Euler).
 */
struct SldoState {
    double d_hat_sl = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;
    double xi1_rate = 0.0;
    double xi2_rate = 0.0;
    double tau_c = 0.0;
    double tau_n = 0.0;
    double tau = 0.0;
    double s = 0.0;
    double eta = 10.0;
    double l1 = 5.0;

    /// Most recent BNDO estimates, newest first.
    std::array<double, 3> d_bn_history{};
    std::size_t samples = 0;
    bool xi_ready = false;
    GuardCounters guards;

    /// Throws std::invalid_argument unless eta > 0 and l1 > 0.
    static SldoState init(double eta, double l1);

    /// xi1 and xi2 need three BNDO samples; before that they are held at 0.
    bool inputs_ready() const noexcept { return samples >= 3; }
};

/// (xi1, xi2) = ((now - prev)/dt, (now - 2 prev + prev2)/dt^2).
std::pair<double, double> sldo_inputs(double d_bn_now, double d_bn_prev, double d_bn_prev2,
                                      double dt);

double sldo_tau_c(double xi1, double xi2, double eta);

/// Throws std::invalid_argument unless l1 > 0.
double sliding_surface(double tau_c, double xi2, double l1);

struct SldoUpdate {
    SldoState state;
    T2nfsParams params;
};

/**
 * Feeds one new BNDO estimate. Integrates d_hat_sl over the previous
 * interval with the previous tau, forms the new inputs and signals, runs the
 * network forward and adapts it with the fresh sliding surface. The returned
 * state's d_hat_sl and tau are the estimate and its rate for this sample.
 * Never reads the true disturbance.
 */
SldoUpdate sldo_update(const SldoState& obs, double bndo_d_hat, const T2nfsParams& params,
                       double dt, const SldoOptions& options = {});

}  // namespace flcsim
