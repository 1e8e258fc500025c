#pragma once

#include <string>
#include <utility>

#include "flcsim/simulation.hpp"

namespace flcsim {

enum class EstimateSource { Sldo, Bndo };

/**
 * Step-response and estimation metrics over the window [t0, t1), closed at
 * t1 when t1 reaches the last sample.
 *
 * final value F is the mean of x1 over the last 10% of the window and the
 * initial deviation D = x1(t0) - F. Times are measured from t0 and crossing
 * instants are linearly interpolated between samples.
 *   steady_state_error  F (the regulation target is the origin)
 *   rise_time_10_90     time between covering 10% and 90% of D; NaN if D ~ 0
 *   settling_time_2pct  last time |x1 - F| > 0.02 |D|; NaN if D ~ 0 or never settled
 *   overshoot_pct       largest excursion past F on the far side, in % of |D|;
 *                       NaN if x1 never crosses F
 *   recovery_time_2pct  last time |x1 - F| > 0.02 max|x1 - F|; for windows that
 *                       open at equilibrium and are kicked by a disturbance
 *   mse_disturbance     mean (d_true - d_hat)^2 with the selected estimate
 */
struct Metrics {
    double steady_state_error = 0.0;
    double rise_time_10_90 = 0.0;
    double settling_time_2pct = 0.0;
    double overshoot_pct = 0.0;
    double recovery_time_2pct = 0.0;
    double mse_disturbance = 0.0;
    double mean_abs_x1 = 0.0;
    double max_abs_x1 = 0.0;
    std::pair<double, double> mse_window{0.0, 0.0};
};

/// Throws std::invalid_argument when no record falls inside [t0, t1].
Metrics compute_metrics(const RunTrace& trace, std::pair<double, double> window,
                        EstimateSource source = EstimateSource::Sldo);

/// The three disturbance phases of the benchmark timeline.
inline constexpr std::pair<double, double> kPhase1{0.0, 20.0};
inline constexpr std::pair<double, double> kPhase2{20.0, 40.0};
inline constexpr std::pair<double, double> kPhase3{40.0, 60.0};

}  // namespace flcsim
