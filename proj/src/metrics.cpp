#include "flcsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace flcsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Interpolated time at which f crosses level between samples a and b.
double crossing(double ta, double fa, double tb, double fb, double level) {
    if (fb == fa) return tb;
    return ta + (level - fa) / (fb - fa) * (tb - ta);
}

// Last time |dev| > threshold, measured from t0. Zero when it never exceeds,
// NaN when it still exceeds at the end of the window.
double last_exceedance(const std::vector<double>& t, const std::vector<double>& dev,
                       double threshold) {
    const std::size_t n = t.size();
    std::size_t last = n;
    for (std::size_t k = n; k-- > 0;) {
        if (std::abs(dev[k]) > threshold) {
            last = k;
            break;
        }
    }
    if (last == n) return 0.0;
    if (last == n - 1) return kNaN;
    return crossing(t[last], std::abs(dev[last]), t[last + 1], std::abs(dev[last + 1]), threshold) -
           t.front();
}

}  // namespace

Metrics compute_metrics(const RunTrace& trace, std::pair<double, double> window,
                        EstimateSource source) {
    constexpr double tol = 1e-9;
    std::vector<double> t, x;
    double sq = 0.0;
    double abs_sum = 0.0;
    double abs_max = 0.0;
    // Half-open like the disturbance phases, except that a window reaching the
    // end of the trace keeps its last sample.
    const bool closed = !trace.records.empty() && window.second >= trace.records.back().t - tol;
    for (const TraceRecord& r : trace.records) {
        if (r.t < window.first - tol) continue;
        if (closed ? r.t > window.second + tol : r.t > window.second - tol) continue;
        t.push_back(r.t);
        x.push_back(r.x1);
        const double est = source == EstimateSource::Sldo ? r.d_hat_sl : r.d_hat_bn;
        sq += (r.d_true - est) * (r.d_true - est);
        abs_sum += std::abs(r.x1);
        abs_max = std::max(abs_max, std::abs(r.x1));
    }
    if (t.empty())
        throw std::invalid_argument("compute_metrics: window [" + std::to_string(window.first) + ", " +
                                    std::to_string(window.second) + "] holds no samples");

    const std::size_t n = t.size();
    Metrics m;
    m.mse_window = window;
    m.mse_disturbance = sq / static_cast<double>(n);
    m.mean_abs_x1 = abs_sum / static_cast<double>(n);
    m.max_abs_x1 = abs_max;

    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    double final_value = 0.0;
    for (std::size_t k = n - tail; k < n; ++k) final_value += x[k];
    final_value /= static_cast<double>(tail);
    m.steady_state_error = final_value;

    std::vector<double> dev(n);
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        dev[k] = x[k] - final_value;
        peak = std::max(peak, std::abs(dev[k]));
    }
    m.recovery_time_2pct = peak > 0.0 ? last_exceedance(t, dev, 0.02 * peak) : kNaN;

    const double initial = dev.front();
    const double scale = std::abs(initial);
    if (!(scale > 1e-12)) {
        m.rise_time_10_90 = m.settling_time_2pct = m.overshoot_pct = kNaN;
        return m;
    }

    // Fraction of the initial deviation already covered.
    std::vector<double> frac(n);
    for (std::size_t k = 0; k < n; ++k) frac[k] = (initial - dev[k]) / initial;

    auto first_reach = [&](double level) {
        if (frac[0] >= level) return t[0];
        for (std::size_t k = 1; k < n; ++k)
            if (frac[k] >= level) return crossing(t[k - 1], frac[k - 1], t[k], frac[k], level);
        return kNaN;
    };
    m.rise_time_10_90 = first_reach(0.9) - first_reach(0.1);
    m.settling_time_2pct = last_exceedance(t, dev, 0.02 * scale);

    double beyond = -1.0;
    for (std::size_t k = 0; k < n; ++k) beyond = std::max(beyond, frac[k] - 1.0);
    m.overshoot_pct = beyond > 0.0 ? 100.0 * beyond : kNaN;
    return m;
}

}  // namespace flcsim
