// Command-line front end: run, compare, sweep, table1, check.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flcsim/batch.hpp"
#include "flcsim/invariants.hpp"
#include "flcsim/metrics.hpp"
#include "flcsim/plots.hpp"
#include "flcsim/scenario.hpp"
#include "flcsim/simulation.hpp"
#include "flcsim/trace_io.hpp"

namespace fs = std::filesystem;
using namespace flcsim;

namespace {

enum Exit { kOk = 0, kOther = 1, kInvariant = 2, kBlowUp = 3, kConfig = 4 };

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

void print_phase_metrics(const std::string& label, const RunTrace& trace, double horizon) {
    std::printf("%-6s %-9s %10s %10s %10s %10s %10s %10s %12s %12s\n", label.c_str(), "window", "x1_final",
                "rise", "settle", "overshoot%", "recovery", "mean|x1|", "mse_d_sl", "mse_d_bn");
    const std::pair<double, double> windows[] = {kPhase1, kPhase2, kPhase3};
    for (auto w : windows) {
        if (w.first >= horizon) break;
        w.second = std::min(w.second, horizon);
        const Metrics m = compute_metrics(trace, w, EstimateSource::Sldo);
        const Metrics mb = compute_metrics(trace, w, EstimateSource::Bndo);
        std::printf("%-6s %4.0f-%-4.0f %10.4g %10.4g %10.4g %10.4g %10.4g %10.4g %12.4g %12.4g\n", "",
                    w.first, w.second, m.steady_state_error, m.rise_time_10_90, m.settling_time_2pct,
                    m.overshoot_pct, m.recovery_time_2pct, m.mean_abs_x1, m.mse_disturbance,
                    mb.mse_disturbance);
    }
}

void write_run_outputs(const RunTrace& trace, const fs::path& dir, const std::string& stem,
                       std::size_t stride) {
    fs::create_directories(dir);
    export_trace(trace, (dir / (stem + ".csv")).string());
    if (stride > 1) export_trace(trace, (dir / (stem + "_downsampled.csv")).string(), stride);
    export_metadata(trace, (dir / (stem + "_metadata.json")).string());
    export_params(trace.final_params, (dir / (stem + "_t2nfs_params.csv")).string());
}

ScenarioConfig load(const std::string& path, const std::string& scheme) {
    ScenarioConfig cfg = load_config(path);
    if (!scheme.empty()) {
        try {
            cfg.scheme = scheme_from_string(scheme);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ControllerVariant variant_arg(const std::string& name) {
    try {
        return variant_from_string(name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void apply_sweep_value(ScenarioConfig& cfg, const std::string& param, double v) {
    if (param == "alpha") cfg.alpha = v;
    else if (param == "eta") cfg.eta = v;
    else if (param == "l1") cfg.l1 = v;
    else if (param == "k1") cfg.k1 = v;
    else if (param == "k2") cfg.k2 = v;
    else if (param == "ki") cfg.ki = v;
    else if (param == "dt") cfg.dt = v;
    else if (param == "q0") cfg.t2nfs_init.q0 = v;
    else if (param == "snr_db") {
        NoiseConfig n = cfg.noise.value_or(NoiseConfig{});
        n.snr_db = v;
        cfg.noise = n;
    } else {
        throw ConfigError("unknown sweep parameter '" + param +
                          "' (alpha, eta, l1, k1, k2, ki, dt, q0, snr_db)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop simulator for disturbance-observer based feedback linearization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(code_version()));

    std::string config = "paper-default";
    std::string out_dir;
    std::string scheme;
    std::string variant;
    std::size_t stride = 10;
    bool no_plots = false;

    auto* run = app.add_subcommand("run", "Simulate one scenario and export trace, metadata and plots");
    run->add_option("--config", config, "Scenario JSON file or 'paper-default'")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--scheme", scheme, "Integration scheme")->check(CLI::IsMember({"euler", "rk4"}));
    run->add_option("--controller", variant, "Override the controller (flc, flci, bndo, sldo)");
    run->add_option("--stride", stride, "Row stride of the downsampled CSV")->check(CLI::PositiveNumber);
    run->add_flag("--no-plots", no_plots, "Skip SVG export");

    std::string controllers = "flc,flci,bndo,sldo";
    auto* compare = app.add_subcommand("compare", "Run several controllers on one scenario");
    compare->add_option("--controllers", controllers, "Comma-separated list");
    compare->add_option("--config", config, "Scenario JSON file or 'paper-default'");
    compare->add_option("--out", out_dir, "Output directory for traces and plots");
    compare->add_option("--scheme", scheme, "Integration scheme")->check(CLI::IsMember({"euler", "rk4"}));

    std::size_t seeds = 10;
    bool serial = false;
    auto* table1 = app.add_subcommand("table1", "Type-1 vs type-2 disturbance-estimation MSE under noise");
    table1->add_option("--seeds", seeds, "Noise seeds per cell")->check(CLI::PositiveNumber);
    table1->add_option("--config", config, "Base scenario");
    table1->add_flag("--serial", serial, "Use the serial reference runner");

    std::string param = "alpha";
    std::string values = "0.01,0.03,0.1,0.5";
    auto* sweep = app.add_subcommand("sweep", "Vary one parameter and report per-phase metrics");
    sweep->add_option("--param", param, "alpha, eta, l1, k1, k2, ki, dt, q0 or snr_db");
    sweep->add_option("--values", values, "Comma-separated values");
    sweep->add_option("--config", config, "Base scenario");
    sweep->add_option("--controller", variant, "Override the controller");
    sweep->add_flag("--serial", serial, "Use the serial reference runner");

    auto* check = app.add_subcommand("check", "Run the invariant suite");
    check->add_option("--config", config, "Scenario to check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) {
            ScenarioConfig cfg = load(config, scheme);
            if (!variant.empty()) cfg.variant = variant_arg(variant);
            const RunTrace trace = run_scenario(cfg);
            std::printf("variant %s, scheme %s, %zu records, config %s, trace %s\n", trace.meta.variant.c_str(),
                        trace.meta.scheme.c_str(), trace.records.size(), trace.meta.config_hash.c_str(),
                        trace_hash(trace).c_str());
            print_phase_metrics(trace.meta.variant, trace, cfg.horizon);
            std::printf("guards fired: %zu, q range [%.4g, %.4g], q outside [0,1] on %zu steps\n",
                        trace.meta.guard_totals.total(), trace.meta.q_min, trace.meta.q_max,
                        trace.meta.q_excursions);
            if (!out_dir.empty()) {
                write_run_outputs(trace, out_dir, "trace", stride);
                if (!no_plots) write_figures({{trace.meta.variant, &trace}}, out_dir);
                std::printf("outputs written to %s\n", out_dir.c_str());
            }
            return kOk;
        }

        if (*compare) {
            const ScenarioConfig base = load(config, scheme);
            std::vector<ScenarioConfig> configs;
            std::vector<std::string> labels;
            for (const auto& name : split(controllers)) {
                ScenarioConfig c = base;
                c.variant = variant_arg(name);
                configs.push_back(c);
                labels.push_back(to_string(c.variant));
            }
            if (configs.empty()) throw ConfigError("no controllers given");
            const auto traces = map_scenarios(configs, [](const RunTrace& t) { return t; }, Execution::Parallel);
            int status = kOk;
            std::vector<std::pair<std::string, const RunTrace*>> plotted;
            for (std::size_t i = 0; i < traces.size(); ++i) {
                if (!traces[i].value) {
                    std::fprintf(stderr, "%s: %s\n", labels[i].c_str(), traces[i].error.c_str());
                    status = traces[i].blew_up ? kBlowUp : kOther;
                    continue;
                }
                print_phase_metrics(labels[i], *traces[i].value, base.horizon);
                plotted.emplace_back(labels[i], &*traces[i].value);
                if (!out_dir.empty()) write_run_outputs(*traces[i].value, out_dir, "trace_" + labels[i], 10);
            }
            if (!out_dir.empty() && !plotted.empty()) {
                write_figures(plotted, out_dir);
                std::printf("outputs written to %s\n", out_dir.c_str());
            }
            return status;
        }

        if (*table1) {
            const ScenarioConfig base = load(config, "");
            std::vector<std::uint64_t> seed_list;
            for (std::size_t s = 0; s < seeds; ++s) seed_list.push_back(1000 + s);
            const MseTable t = mse_table(base, seed_list, serial ? Execution::Serial : Execution::Parallel);
            std::printf("Disturbance-estimation MSE, %zu seeds, %d threads\n%s", seeds,
                        serial ? 1 : worker_threads(), format_mse_table(t).c_str());
            std::printf("reference cells (not reproducible bit-for-bit):\n");
            MseTable ref = t;
            ref.mse = kReportedMse;
            ref.failures = 0;
            for (int s = 0; s < 3; ++s)
                ref.improvement_pct[s] = 100.0 * (ref.mse[0][s] - ref.mse[1][s]) / ref.mse[0][s];
            std::printf("%s", format_mse_table(ref).c_str());
            for (const auto& m : t.failure_messages) std::fprintf(stderr, "failed run: %s\n", m.c_str());
            return t.failures > 0 ? kBlowUp : kOk;
        }

        if (*sweep) {
            ScenarioConfig base = load(config, "");
            if (!variant.empty()) base.variant = variant_arg(variant);
            std::vector<double> vals;
            std::vector<ScenarioConfig> configs;
            for (const auto& v : split(values)) {
                ScenarioConfig c = base;
                vals.push_back(parse_double(v));
                apply_sweep_value(c, param, vals.back());
                c.validate();
                configs.push_back(c);
            }
            const double horizon = base.horizon;
            const auto rows = map_scenarios(
                configs,
                [horizon](const RunTrace& t) {
                    std::vector<Metrics> m;
                    for (auto w : {kPhase1, kPhase2, kPhase3})
                        if (w.first < horizon)
                            m.push_back(compute_metrics(t, {w.first, std::min(w.second, horizon)}));
                    return m;
                },
                serial ? Execution::Serial : Execution::Parallel);
            std::printf("%-10s %-6s %12s %12s %12s %12s\n", param.c_str(), "phase", "x1_final", "mean|x1|",
                        "recovery", "mse_d_sl");
            int status = kOk;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!rows[i].value) {
                    std::printf("%-10g failed: %s\n", vals[i], rows[i].error.c_str());
                    if (rows[i].blew_up) status = kBlowUp;
                    continue;
                }
                for (std::size_t p = 0; p < rows[i].value->size(); ++p) {
                    const Metrics& m = (*rows[i].value)[p];
                    std::printf("%-10g %-6zu %12.5g %12.5g %12.5g %12.5g\n", vals[i], p + 1, m.steady_state_error,
                                m.mean_abs_x1, m.recovery_time_2pct, m.mse_disturbance);
                }
            }
            return status;
        }

        if (*check) {
            const ScenarioConfig cfg = load(config, "");
            const InvariantReport report = run_invariant_suite(cfg);
            for (const auto& c : report.checks)
                std::printf("%s  %-42s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
            std::printf("%s (%.2f s)\n", report.passed() ? "all invariants hold" : "invariant failure",
                        report.seconds);
            return report.passed() ? kOk : kInvariant;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const SimulationError& e) {
        std::fprintf(stderr, "numerical blow-up: %s (last valid record %zu)\n", e.what(), e.last_valid());
        return kBlowUp;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical blow-up: %s\n", e.what());
        return kBlowUp;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kOther;
    }
    return kOk;
}
