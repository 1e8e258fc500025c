#include "flcsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flcsim/bndo.hpp"
#include "flcsim/controllers.hpp"
#include "flcsim/sldo.hpp"

#ifndef FLCSIM_VERSION
#define FLCSIM_VERSION "dev"
#endif

namespace flcsim {

const char* code_version() noexcept { return FLCSIM_VERSION; }

double inject_noise(double y, double snr_db, double signal_power, NoiseEngine& engine) {
    if (std::isinf(snr_db) && snr_db > 0.0) return y;
    const double variance = signal_power / std::pow(10.0, snr_db / 10.0);
    if (!(variance > 0.0)) return y;
    std::normal_distribution<double> normal(0.0, std::sqrt(variance));
    return y + normal(engine);
}

namespace {

// Measurement path: the running mean square of the clean outputs sets the
// noise power for each channel.
class Sensor {
public:
    explicit Sensor(const std::optional<NoiseConfig>& cfg) : cfg_(cfg) {
        if (cfg_) engine_.seed(cfg_->seed);
    }

    PlantState measure(const PlantState& x) {
        if (!cfg_) return x;
        ++n_;
        sum_sq1_ += x.x1 * x.x1;
        sum_sq2_ += x.x2 * x.x2;
        PlantState y = x;
        y.x1 = inject_noise(x.x1, cfg_->snr_db, sum_sq1_ / n_, engine_);
        if (cfg_->channels == NoiseChannels::Both)
            y.x2 = inject_noise(x.x2, cfg_->snr_db, sum_sq2_ / n_, engine_);
        return y;
    }

private:
    std::optional<NoiseConfig> cfg_;
    NoiseEngine engine_;
    double sum_sq1_ = 0.0;
    double sum_sq2_ = 0.0;
    double n_ = 0.0;
};

}  // namespace

RunTrace run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    const PlantModel model = plant_by_name(cfg.plant);
    const ControllerGains gains(cfg.k1, cfg.k2, cfg.ki);
    const std::size_t n_steps = cfg.steps();
    const double dt = cfg.dt;

    T2nfsParams params = T2nfsParams::make(cfg.mf_i, cfg.mf_j, cfg.alpha, cfg.t2nfs_init);
    if (cfg.type1) params = to_type1(params);

    SldoOptions sldo_opt;
    sldo_opt.adapt = cfg.adapt;
    sldo_opt.adaptation = cfg.adaptation;

    RunTrace trace;
    trace.records.reserve(n_steps + 1);
    trace.meta.config_hash = config_hash(cfg);
    trace.meta.scheme = to_string(cfg.scheme);
    trace.meta.variant = to_string(cfg.variant);
    trace.meta.code_version = code_version();
    trace.meta.q_min = std::numeric_limits<double>::infinity();
    trace.meta.q_max = -std::numeric_limits<double>::infinity();

    Sensor sensor(cfg.noise);
    PlantState x = cfg.x0;
    BndoState bndo;
    SldoState sldo = SldoState::init(cfg.eta, cfg.l1);
    ControllerState ctrl{cfg.variant, 0.0};
    double u_prev = 0.0;

    auto fail = [&](const std::string& what, std::size_t k) -> SimulationError {
        const std::size_t last =
            trace.records.empty() ? NumericalError::npos : trace.records.size() - 1;
        return SimulationError("step " + std::to_string(k) + ": " + what, last);
    };

    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        try {
            const PlantState y = sensor.measure(x);
            if (k == 0) {
                bndo = BndoState::init({cfg.l1, cfg.l2}, y);
            } else {
                bndo = bndo_update(bndo, y, u_prev, model, dt, cfg.scheme);
            }

            const double q_used = params.q;
            SldoUpdate upd = sldo_update(sldo, bndo.d_hat, params, dt, sldo_opt);
            sldo = upd.state;
            params = std::move(upd.params);

            double u = 0.0;
            switch (cfg.variant) {
                case ControllerVariant::Flc: u = flc_control(y, gains, model); break;
                case ControllerVariant::FlcI: {
                    const FlciOutput out = flci_control(y, ctrl, gains, model, dt);
                    u = out.u;
                    ctrl = out.next;
                    break;
                }
                case ControllerVariant::FlcBndo: u = flc_bndo_control(y, bndo.d_hat, gains, model); break;
                case ControllerVariant::FlcSldo:
                    u = flc_sldo_control(y, sldo.d_hat_sl, sldo.tau, gains, model);
                    break;
            }

            const double d_true = eval_disturbance(cfg.disturbance, t);
            TraceRecord rec{t,          x.x1,        x.x2,      u,          d_true,
                            bndo.d_hat, sldo.d_hat_sl, sldo.tau, sldo.tau_c, sldo.tau_n,
                            sldo.s,     q_used,      static_cast<std::uint32_t>(sldo.guards.total())};
            const double fields[] = {rec.u, rec.d_hat_bn, rec.d_hat_sl, rec.tau, rec.tau_c,
                                     rec.tau_n, rec.s, rec.q};
            for (double v : fields)
                if (!std::isfinite(v)) throw NumericalError("non-finite controller or observer signal");
            trace.records.push_back(rec);
            trace.meta.guard_totals += sldo.guards;
            trace.meta.q_min = std::min(trace.meta.q_min, q_used);
            trace.meta.q_max = std::max(trace.meta.q_max, q_used);
            if (q_used < 0.0 || q_used > 1.0) ++trace.meta.q_excursions;

            if (k == n_steps) break;

            auto rhs = [&](double ts, const std::array<double, 2>& s) {
                const PlantDerivatives dv =
                    plant_derivatives({s[0], s[1]}, u, eval_disturbance(cfg.disturbance, ts), model);
                return std::array<double, 2>{dv.dx1, dv.dx2};
            };
            const auto next = integrate_step<2>({x.x1, x.x2}, rhs, t, dt, cfg.scheme);
            x = {next[0], next[1]};
            if (!x.finite()) throw NumericalError("plant state is not finite");
            u_prev = u;
        } catch (const NumericalError& e) {
            throw fail(e.what(), k);
        }
    }
    trace.final_params = params;
    return trace;
}

}  // namespace flcsim
