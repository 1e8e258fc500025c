#include "flcsim/invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "flcsim/batch.hpp"
#include "flcsim/bndo.hpp"
#include "flcsim/sldo.hpp"
#include "flcsim/trace_io.hpp"

namespace flcsim {

bool InvariantReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

std::string describe(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    return buf;
}

// Tracks the first failing step of a per-step check.
struct StepCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t first_bad = static_cast<std::size_t>(-1);
    double worst = 0.0;

    void record(std::size_t k, bool ok, double magnitude = 0.0) {
        ++checked;
        worst = std::max(worst, magnitude);
        if (!ok && first_bad == static_cast<std::size_t>(-1)) first_bad = k;
    }
    CheckResult result() const {
        const bool ok = first_bad == static_cast<std::size_t>(-1) && checked > 0;
        std::string detail = std::to_string(checked) + " steps";
        if (!ok) detail += checked ? ", first violation at step " + std::to_string(first_bad) : ", nothing checked";
        if (worst > 0.0) detail += describe(", worst %.3g", worst);
        return {name, ok, detail};
    }
};

void replay_observers(const ScenarioConfig& cfg, const RunTrace& trace, std::vector<CheckResult>& out) {
    const PlantModel model = plant_by_name(cfg.plant);
    T2nfsParams params = T2nfsParams::make(cfg.mf_i, cfg.mf_j, cfg.alpha, cfg.t2nfs_init);
    if (cfg.type1) params = to_type1(params);
    SldoOptions opt;
    opt.adapt = cfg.adapt;
    opt.adaptation = cfg.adaptation;
    SldoState sldo = SldoState::init(cfg.eta, cfg.l1);
    BndoState bndo;

    StepCheck norm{"firing strengths normalized"};
    StepCheck bounds{"normalized strengths in (0, 1]"};
    StepCheck spread{"spreads positive and above floor"};
    StepCheck tau_id{"tau = tau_c - tau_n"};
    StepCheck surf_id{"s = tau_c + xi2 / l1"};
    StepCheck bn_id{"BNDO estimate identity d_hat = p + l x"};
    StepCheck replay{"observer replay matches trace"};

    const auto& recs = trace.records;
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const TraceRecord& r = recs[k];
        const PlantState x{r.x1, r.x2};
        bndo = k == 0 ? BndoState::init({cfg.l1, cfg.l2}, x)
                      : bndo_update(bndo, x, recs[k - 1].u, model, cfg.dt, cfg.scheme);
        bn_id.record(k, bndo.d_hat == bndo.p + bndo.lx(x));

        const T2nfsParams before = params;
        SldoUpdate upd = sldo_update(sldo, bndo.d_hat, params, cfg.dt, opt);
        sldo = upd.state;
        params = std::move(upd.params);

        const FiringState f = forward(before, sldo.xi1, sldo.xi2);
        double sl = 0.0, su = 0.0;
        bool in_range = true;
        for (std::size_t i = 0; i < f.w_norm_lower.size(); ++i) {
            sl += f.w_norm_lower[i];
            su += f.w_norm_upper[i];
            in_range = in_range && f.w_norm_lower[i] > 0.0 && f.w_norm_lower[i] <= 1.0 &&
                       f.w_norm_upper[i] > 0.0 && f.w_norm_upper[i] <= 1.0;
        }
        const double norm_err = std::max(std::abs(sl - 1.0), std::abs(su - 1.0));
        norm.record(k, norm_err <= 1e-12, norm_err);
        bounds.record(k, in_range);

        double min_sigma = INFINITY;
        for (const MembershipFamily* fam : {&params.lower, &params.upper})
            for (const auto& v : fam->sigma)
                for (double sgm : v) min_sigma = std::min(min_sigma, sgm);
        spread.record(k, min_sigma > 0.0 && min_sigma >= opt.adaptation.sigma_floor);

        tau_id.record(k, sldo.tau == sldo.tau_c - sldo.tau_n);
        surf_id.record(k, sldo.s == sldo.tau_c + sldo.xi2 / sldo.l1);

        const bool same = bndo.d_hat == r.d_hat_bn && sldo.d_hat_sl == r.d_hat_sl &&
                          sldo.tau == r.tau && sldo.tau_c == r.tau_c && sldo.tau_n == r.tau_n &&
                          sldo.s == r.s && f.tau_n == r.tau_n;
        replay.record(k, same);
    }
    for (const StepCheck* c : {&norm, &bounds, &spread, &tau_id, &surf_id, &bn_id, &replay})
        out.push_back(c->result());
}

}  // namespace

InvariantReport run_invariant_suite(const ScenarioConfig& base, double time_budget_s) {
    const auto start = std::chrono::steady_clock::now();
    InvariantReport report;
    auto& out = report.checks;

    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };

    ScenarioConfig clean = base;
    clean.noise.reset();

    guarded("observer replay", [&] {
        const RunTrace trace = run_scenario(clean);
        const std::size_t expected = clean.steps() + 1;
        bool uniform = trace.records.size() == expected;
        for (std::size_t k = 0; uniform && k < trace.records.size(); ++k)
            uniform = trace.records[k].t == static_cast<double>(k) * clean.dt;
        out.push_back({"trace length and uniform time grid", uniform,
                       std::to_string(trace.records.size()) + " records, expected " +
                           std::to_string(expected)});
        replay_observers(clean, trace, out);

        const RunTrace again = run_scenario(clean);
        const std::string h1 = trace_hash(trace), h2 = trace_hash(again);
        out.push_back({"trace determinism hash", h1 == h2, h1 + " vs " + h2});

        const RunTrace reread = trace_from_csv(trace_to_csv(trace));
        out.push_back({"CSV round trip is exact", reread.records == trace.records,
                       std::to_string(reread.records.size()) + " records"});
    });

    guarded("noisy determinism", [&] {
        // A noisy run may legitimately blow up; the outcome (hash, or the
        // error and last valid record) must still repeat exactly.
        ScenarioConfig noisy = base;
        if (!noisy.noise) noisy.noise = NoiseConfig{40.0, 7, NoiseChannels::Both};
        auto outcome = [&] {
            try {
                return "trace " + trace_hash(run_scenario(noisy));
            } catch (const SimulationError& e) {
                return std::string("blow-up '") + e.what() + "' after record " + std::to_string(e.last_valid());
            }
        };
        const std::string a = outcome(), b = outcome();
        out.push_back({"noisy run determinism", a == b, a == b ? a : a + " vs " + b});
    });

    guarded("batch determinism", [&] {
        std::vector<ScenarioConfig> configs;
        for (auto v : {ControllerVariant::Flc, ControllerVariant::FlcI, ControllerVariant::FlcBndo,
                       ControllerVariant::FlcSldo}) {
            ScenarioConfig c = clean;
            c.variant = v;
            configs.push_back(c);
        }
        const auto hash = [](const RunTrace& t) { return trace_hash(t); };
        const auto serial = map_scenarios(configs, hash, Execution::Serial);
        const auto parallel = map_scenarios(configs, hash, Execution::Parallel);
        bool same = true;
        std::string detail;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            same = same && serial[i].value && parallel[i].value && *serial[i].value == *parallel[i].value;
            if (!serial[i].value) detail += serial[i].error + "; ";
        }
        out.push_back({"serial and parallel batch hashes agree", same,
                       detail.empty() ? std::to_string(configs.size()) + " variants on " +
                                            std::to_string(worker_threads()) + " threads"
                                      : detail});
    });

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back({"suite runtime within budget", report.seconds < time_budget_s,
                   describe("%.2f s (budget %.0f s)", report.seconds, time_budget_s)});
    return report;
}

}  // namespace flcsim
