// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances are fixed here and must not be loosened to make a line pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "flcsim/batch.hpp"
#include "flcsim/invariants.hpp"
#include "flcsim/metrics.hpp"
#include "flcsim/smoothing.hpp"
#include "flcsim/t2nfs.hpp"

using namespace flcsim;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunTrace run_variant(ControllerVariant v, double alpha = 0.03) {
    ScenarioConfig c = ScenarioConfig::paper_default();
    c.variant = v;
    c.alpha = alpha;
    return run_scenario(c);
}

double mean_abs_x1(const RunTrace& tr, double t0, double t1) {
    return compute_metrics(tr, {t0, t1}).mean_abs_x1;
}

// 1. FLC plateau under the step equals k2 d / k1.
Verdict flc_plateau() {
    const auto t0 = std::chrono::steady_clock::now();
    const RunTrace tr = run_variant(ControllerVariant::Flc);
    const double secs = seconds_since(t0);
    const double target = 5.0 * 0.5 / 3.0;
    double worst = 0.0;
    for (const auto& r : tr.records)
        if (r.t >= 35.0 && r.t <= 40.0 - 1e-9) worst = std::max(worst, std::abs(r.x1 - target));
    return {worst <= 0.01 && secs < 5.0,
            fmt("max |x1 - %.4f| on [35,40) = %.2e (tol 1e-2), run %.2f s (limit 5 s)", target, worst, secs)};
}

// 2. BNDO error follows 0.5 exp(-5t) under a constant disturbance.
Verdict bndo_exponential() {
    ScenarioConfig c = ScenarioConfig::paper_default();
    c.variant = ControllerVariant::Flc;
    c.disturbance = StepDisturbance{0.5, 0.0};
    c.horizon = 1.0;
    const RunTrace tr = run_scenario(c);
    double worst = 0.0;
    for (const auto& r : tr.records)
        worst = std::max(worst, std::abs((r.d_true - r.d_hat_bn) - 0.5 * std::exp(-5.0 * r.t)));
    return {worst <= 1e-3, fmt("sup |e_d - 0.5 exp(-5t)| on [0,1] = %.2e (tol 1e-3)", worst)};
}

// 3. Nominal performance recovery in the disturbance-free phase.
Verdict nominal_recovery(const RunTrace& flc, const RunTrace& flci, const RunTrace& bndo,
                         const RunTrace& sldo) {
    auto sup = [](const RunTrace& a, const RunTrace& b) {
        double m = 0.0;
        for (std::size_t k = 0; k < a.records.size() && a.records[k].t < 20.0 - 1e-9; ++k)
            m = std::max(m, std::abs(a.records[k].x1 - b.records[k].x1));
        return m;
    };
    const double fb = sup(flc, bndo), fs = sup(flc, sldo), bs = sup(bndo, sldo);
    // A response that never crosses its final value has no overshoot.
    auto overshoot = [](const RunTrace& tr) {
        const double o = compute_metrics(tr, kPhase1).overshoot_pct;
        return std::isnan(o) ? 0.0 : o;
    };
    const double o_flc = overshoot(flc), o_flci = overshoot(flci);
    const bool pass = fb <= 1e-3 && fs <= 1e-3 && bs <= 1e-3 && o_flci > o_flc;
    return {pass, fmt("sup|dx1| flc/bndo %.2e, flc/sldo %.2e, bndo/sldo %.2e (tol 1e-3); ", fb, fs, bs) +
                      fmt("overshoot flci %.3g%% vs flc %.3g%%", o_flci, o_flc)};
}

// 4. Finite-difference tau_n rate converges to -2 alpha sgn(s) at first order.
Verdict appendix_identity() {
    T2nfsParams p = T2nfsParams::make(3, 3, 0.03);
    const double fvals[] = {0.4, -0.2, 0.9, -0.7, 0.1, 0.5, -0.3, 0.8, -0.6};
    for (std::size_t k = 0; k < p.f.size(); ++k) p.f[k] = fvals[k];
    const double xi1 = 0.7, xi2 = -1.3, s = 10.0;
    const double target = -2.0 * p.alpha * smoothed_sign(s, kDefaultSgnDelta);
    const double dts[] = {1e-3, 1e-4, 1e-5};
    double err[3];
    std::size_t guards = 0;
    for (int i = 0; i < 3; ++i) {
        const FiringState f = forward(p, xi1, xi2);
        const AdaptResult a = adapt(p, f, xi1, xi2, 0.0, 0.0, s, dts[i]);
        guards += a.guards.total();
        err[i] = std::abs(tau_n_rate_oracle(p, a.params, xi1, xi2, dts[i]) - target);
    }
    const double slope = std::log10(err[0] / err[2]) / 2.0;
    double c_max = 0.0;
    for (int i = 0; i < 3; ++i) c_max = std::max(c_max, err[i] / dts[i]);
    const bool pass = guards == 0 && std::abs(slope - 1.0) <= 0.15 && std::isfinite(c_max);
    return {pass, fmt("errors %.2e %.2e %.2e, log-log slope %.3f (1 +- 0.15), ", err[0], err[1], err[2], slope) +
                      fmt("C = %.3g, guards %g", c_max, static_cast<double>(guards))};
}

// 5. The network takes over the estimation signal late in the step phase.
Verdict fel_takeover(const RunTrace& sldo) {
    double sc = 0.0, sn = 0.0;
    std::size_t n = 0;
    for (const auto& r : sldo.records)
        if (r.t >= 39.0 && r.t <= 40.0 - 1e-9) {
            sc += std::abs(r.tau_c);
            sn += std::abs(r.tau_n);
            ++n;
        }
    const double ratio = (sc / n) / (sn / n);
    return {ratio < 0.05, fmt("mean|tau_c| %.3e, mean|tau_n| %.3e on [39,40), ratio %.3g (limit 0.05)", sc / n,
                              sn / n, ratio)};
}

// 6. V = s^2/2 non-increasing on guard-free steps of the multi-sine phase.
// Measured in the FLC-SLDO loop and, since s depends only on the BNDO, also
// with the observer running open loop under FLC-BNDO. Both must hold.
Verdict surface_decrease() {
    const double alpha = 0.5;
    auto measure = [&](ControllerVariant v) -> std::pair<bool, std::string> {
        RunTrace tr;
        try {
            tr = run_variant(v, alpha);
        } catch (const SimulationError& e) {
            return {false, std::string("blew up (") + e.what() + ")"};
        }
        std::size_t steps = 0, ok = 0, all = 0, all_ok = 0;
        for (std::size_t k = 1; k < tr.records.size(); ++k) {
            const auto& r = tr.records[k];
            if (r.t < 40.0) continue;
            const double v_prev = 0.5 * tr.records[k - 1].s * tr.records[k - 1].s;
            const bool dec = 0.5 * r.s * r.s <= v_prev;
            ++all;
            all_ok += dec;
            if (r.guards != 0) continue;
            ++steps;
            ok += dec;
        }
        const double frac = steps ? static_cast<double>(ok) / static_cast<double>(steps) : kNaN;
        return {steps > 0 && frac >= 0.99,
                fmt("%.2f%% of %g guard-free steps (%.2f%% of all %g steps)", 100.0 * frac,
                    static_cast<double>(steps), 100.0 * static_cast<double>(all_ok) / static_cast<double>(all),
                    static_cast<double>(all))};
    };
    const auto loop = measure(ControllerVariant::FlcSldo);
    const auto open = measure(ControllerVariant::FlcBndo);
    return {loop.first && open.first, fmt("alpha %.2f, V non-increasing in [40,60] (need 99%%): ", alpha) +
                                          "sldo loop " + loop.second + "; observer under bndo loop " +
                                          open.second};
}

// 7. Robustness in the multi-sine phase.
Verdict phase3_robustness(const RunTrace& flc, const RunTrace& flci, const RunTrace& bndo, const RunTrace& sldo) {
    const double m_sl = mean_abs_x1(sldo, 45, 60);
    const double m_f = mean_abs_x1(flc, 45, 60), m_i = mean_abs_x1(flci, 45, 60), m_b = mean_abs_x1(bndo, 45, 60);
    const bool pass = m_sl < 0.25 * m_f && m_sl < 0.25 * m_i && m_sl < 0.25 * m_b;
    return {pass, fmt("mean|x1| on [45,60]: sldo %.4g vs flc %.4g, flci %.4g, bndo %.4g (need < 25%% of each)",
                      m_sl, m_f, m_i, m_b)};
}

// 8. Type-2 vs type-1 estimation MSE under output noise.
Verdict noise_table() {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(1000 + s);
    const MseTable t = mse_table(ScenarioConfig::paper_default(), seeds, Execution::Parallel);
    const double r20 = t.improvement_pct[0], r40 = t.improvement_pct[1], r80 = t.improvement_pct[2];
    const bool pass = t.mse[1][0] <= t.mse[0][0] && r20 > r40 && r40 > r80;
    std::string d = fmt("type-1 MSE %.4g/%.4g/%.4g, ", t.mse[0][0], t.mse[0][1], t.mse[0][2]) +
                    fmt("type-2 %.4g/%.4g/%.4g at 20/40/80 dB; ", t.mse[1][0], t.mse[1][1], t.mse[1][2]) +
                    fmt("gap %.3g%%/%.3g%%/%.3g%%; ", r20, r40, r80) +
                    fmt("%g of 60 runs blew up (excluded)", static_cast<double>(t.failures));
    return {pass, d};
}

// 9. The invariant suite behind `check`.
Verdict invariant_suite() {
    const InvariantReport rep = run_invariant_suite(ScenarioConfig::paper_default());
    std::string failed;
    for (const auto& c : rep.checks)
        if (!c.passed) failed += " [" + c.name + ": " + c.detail + "]";
    return {rep.passed() && rep.seconds < 60.0,
            fmt("%g checks in %.2f s (limit 60 s)", static_cast<double>(rep.checks.size()), rep.seconds) +
                (failed.empty() ? "" : "; failed:" + failed)};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Verdict()>>> criteria;

    // Shared paper-default traces, run once.
    const RunTrace flc = run_variant(ControllerVariant::Flc);
    const RunTrace flci = run_variant(ControllerVariant::FlcI);
    const RunTrace bndo = run_variant(ControllerVariant::FlcBndo);
    const RunTrace sldo = run_variant(ControllerVariant::FlcSldo);

    criteria.emplace_back("1 FLC step plateau", flc_plateau);
    criteria.emplace_back("2 BNDO exponential error law", bndo_exponential);
    criteria.emplace_back("3 nominal performance recovery", [&] { return nominal_recovery(flc, flci, bndo, sldo); });
    criteria.emplace_back("4 network output rate identity", appendix_identity);
    criteria.emplace_back("5 network takeover in step phase", [&] { return fel_takeover(sldo); });
    criteria.emplace_back("6 sliding surface decrease", surface_decrease);
    criteria.emplace_back("7 multi-sine robustness", [&] { return phase3_robustness(flc, flci, bndo, sldo); });
    criteria.emplace_back("8 type-2 vs type-1 noise MSE", noise_table);
    criteria.emplace_back("9 invariant suite", invariant_suite);

    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("%s  %-34s %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
