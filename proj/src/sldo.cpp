#include "flcsim/sldo.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "flcsim/plant.hpp"

namespace flcsim {

SldoState SldoState::init(double eta, double l1) {
    if (!(eta > 0.0)) throw std::invalid_argument("SLDO coefficient eta must be positive");
    if (!(l1 > 0.0)) throw std::invalid_argument("SLDO needs a positive BNDO gain l1");
    SldoState s;
    s.eta = eta;
    s.l1 = l1;
    return s;
}

std::pair<double, double> sldo_inputs(double now, double prev, double prev2, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("sldo_inputs: dt must be positive");
    return {(now - prev) / dt, (now - 2.0 * prev + prev2) / (dt * dt)};
}

double sldo_tau_c(double xi1, double xi2, double eta) { return xi1 + eta * xi2; }

double sliding_surface(double tau_c, double xi2, double l1) {
    if (!(l1 > 0.0)) throw std::invalid_argument("sliding_surface: l1 must be positive");
    return tau_c + xi2 / l1;
}

SldoUpdate sldo_update(const SldoState& obs, double bndo_d_hat, const T2nfsParams& params,
                       double dt, const SldoOptions& opt) {
    if (!(dt > 0.0)) throw std::invalid_argument("sldo_update: dt must be positive");
    if (!std::isfinite(bndo_d_hat)) throw NumericalError("SLDO input: BNDO estimate is not finite");

    SldoUpdate out{obs, params};
    SldoState& st = out.state;

    if (st.samples > 0) st.d_hat_sl += dt * obs.tau;

    st.d_bn_history = {bndo_d_hat, obs.d_bn_history[0], obs.d_bn_history[1]};
    if (st.samples < 3) ++st.samples;

    const double xi1_prev = obs.xi1;
    const double xi2_prev = obs.xi2;
    if (st.inputs_ready()) {
        std::tie(st.xi1, st.xi2) =
            sldo_inputs(st.d_bn_history[0], st.d_bn_history[1], st.d_bn_history[2], dt);
        if (st.xi_ready) {
            st.xi1_rate = (st.xi1 - xi1_prev) / dt;
            st.xi2_rate = (st.xi2 - xi2_prev) / dt;
        } else {
            st.xi1_rate = 0.0;
            st.xi2_rate = 0.0;
        }
        st.xi_ready = true;
    } else {
        st.xi1 = st.xi2 = st.xi1_rate = st.xi2_rate = 0.0;
    }

    st.tau_c = sldo_tau_c(st.xi1, st.xi2, st.eta);
    st.s = sliding_surface(st.tau_c, st.xi2, st.l1);

    const FiringState firing = forward(params, st.xi1, st.xi2);
    st.tau_n = firing.tau_n;
    st.tau = st.tau_c - st.tau_n;

    st.guards = {};
    if (opt.adapt) {
        AdaptResult adapted = adapt(params, firing, st.xi1, st.xi2, st.xi1_rate, st.xi2_rate, st.s,
                                    dt, opt.adaptation);
        out.params = std::move(adapted.params);
        st.guards = adapted.guards;
    }
    return out;
}

}  // namespace flcsim
