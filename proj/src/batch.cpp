#include "flcsim/batch.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "flcsim/metrics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flcsim {

int worker_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

MseTable mse_table(const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds,
                   Execution exec, std::array<double, 3> snr_db) {
    MseTable table;
    table.snr_db = snr_db;

    struct Cell {
        int type;
        int snr;
    };
    std::vector<ScenarioConfig> configs;
    std::vector<Cell> cells;
    for (int type = 0; type < 2; ++type)
        for (int s = 0; s < 3; ++s)
            for (std::uint64_t seed : seeds) {
                ScenarioConfig c = base;
                c.type1 = type == 0;
                NoiseConfig nc = base.noise.value_or(NoiseConfig{});
                nc.snr_db = snr_db[s];
                nc.seed = seed;
                c.noise = nc;
                configs.push_back(std::move(c));
                cells.push_back({type, s});
            }

    const double horizon = base.horizon;
    const auto results = map_scenarios(
        configs,
        [horizon](const RunTrace& trace) {
            return compute_metrics(trace, {0.0, horizon}, EstimateSource::Sldo).mse_disturbance;
        },
        exec);

    for (std::size_t k = 0; k < results.size(); ++k) {
        const Cell c = cells[k];
        if (results[k].value) {
            table.per_seed[c.type][c.snr].push_back(*results[k].value);
        } else {
            ++table.failures;
            table.failure_messages.push_back(results[k].error);
        }
    }
    for (int type = 0; type < 2; ++type)
        for (int s = 0; s < 3; ++s) {
            const auto& v = table.per_seed[type][s];
            double sum = 0.0;
            for (double x : v) sum += x;
            table.mse[type][s] =
                v.empty() ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(v.size());
        }
    for (int s = 0; s < 3; ++s)
        table.improvement_pct[s] = 100.0 * (table.mse[0][s] - table.mse[1][s]) / table.mse[0][s];
    return table;
}

std::string format_mse_table(const MseTable& t) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-12s %11.0f dB %11.0f dB %11.0f dB\n", "", t.snr_db[0],
                  t.snr_db[1], t.snr_db[2]);
    out += buf;
    const char* names[2] = {"Type-1 NFS", "Type-2 NFS"};
    for (int type = 0; type < 2; ++type) {
        std::snprintf(buf, sizeof buf, "%-12s %14.6g %14.6g %14.6g\n", names[type], t.mse[type][0],
                      t.mse[type][1], t.mse[type][2]);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-12s %13.2f%% %13.2f%% %13.2f%%\n", "Improvement",
                  t.improvement_pct[0], t.improvement_pct[1], t.improvement_pct[2]);
    out += buf;
    if (t.failures > 0) {
        std::snprintf(buf, sizeof buf, "(%zu runs failed and are excluded)\n", t.failures);
        out += buf;
    }
    return out;
}

}  // namespace flcsim
