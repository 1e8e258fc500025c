#include "flcsim/bndo.hpp"

#include <cmath>
#include <stdexcept>

namespace flcsim {

BndoState BndoState::init(const BndoGains& gains, const PlantState& x0, double d_hat0) {
    if (!(gains.l1 > 0.0)) throw std::invalid_argument("BNDO gain l1 must be positive");
    if (!std::isfinite(gains.l2)) throw std::invalid_argument("BNDO gain l2 must be finite");
    BndoState s;
    s.gains = gains;
    s.x_meas = x0;
    s.p = d_hat0 - s.lx(x0);
    s.d_hat = s.p + s.lx(x0);
    return s;
}

double bndo_p_rate(double p, const PlantState& x, double u, const BndoGains& l,
                   const PlantModel& model) {
    // With z = [1, 0]: l z = l1 and l (z l x) = l1 (l x).
    const double lx = l.l1 * x.x1 + l.l2 * x.x2;
    const double l_g1 = l.l1 * x.x2 + l.l2 * model.a(x);
    const double l_g2u = l.l2 * model.b(x) * u;
    return -l.l1 * p - (l.l1 * lx + l_g1 + l_g2u);
}

BndoState bndo_update(const BndoState& obs, const PlantState& x_now, double u,
                      const PlantModel& model, double dt, Scheme scheme) {
    if (!(dt > 0.0)) throw std::invalid_argument("bndo_update: dt must be positive");
    const PlantState x0 = obs.x_meas;
    const PlantState dx{x_now.x1 - x0.x1, x_now.x2 - x0.x2};

    auto rhs = [&](double theta, const std::array<double, 1>& y) {
        const PlantState xs{x0.x1 + theta * dx.x1, x0.x2 + theta * dx.x2};
        return std::array<double, 1>{bndo_p_rate(y[0], xs, u, obs.gains, model)};
    };
    // Integrate in normalized time theta = (t - t_k)/dt.
    auto scaled = [&](double theta, const std::array<double, 1>& y) {
        auto r = rhs(theta, y);
        r[0] *= dt;
        return r;
    };
    const auto p = integrate_step<1>({obs.p}, scaled, 0.0, 1.0, scheme)[0];
    if (!std::isfinite(p)) throw NumericalError("BNDO internal state p is not finite");

    BndoState next = obs;
    next.p = p;
    next.x_meas = x_now;
    next.d_hat = p + next.lx(x_now);
    return next;
}

double bndo_rate(const BndoState& prev, const BndoState& now, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("bndo_rate: dt must be positive");
    return (now.d_hat - prev.d_hat) / dt;
}

}  // namespace flcsim
