// Serial reference vs OpenMP batch runner on a sweep of full-length scenarios.
//   bench_batch [runs]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "flcsim/batch.hpp"
#include "flcsim/trace_io.hpp"

using namespace flcsim;

int main(int argc, char** argv) {
    const std::size_t runs = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 8;
    std::vector<ScenarioConfig> configs;
    const ControllerVariant variants[] = {ControllerVariant::Flc, ControllerVariant::FlcI,
                                          ControllerVariant::FlcBndo, ControllerVariant::FlcSldo};
    for (std::size_t i = 0; i < runs; ++i) {
        ScenarioConfig c = ScenarioConfig::paper_default();
        c.variant = variants[i % 4];
        c.alpha = 0.03 * static_cast<double>(1 + i / 4);
        configs.push_back(c);
    }
    const auto hash = [](const RunTrace& t) { return trace_hash(t); };

    auto time = [&](Execution exec) {
        const auto t0 = std::chrono::steady_clock::now();
        auto out = map_scenarios(configs, hash, exec);
        return std::make_pair(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
                              out);
    };
    const auto [serial_s, serial] = time(Execution::Serial);
    const auto [parallel_s, parallel] = time(Execution::Parallel);

    bool same = true;
    for (std::size_t i = 0; i < runs; ++i)
        same = same && serial[i].value == parallel[i].value && serial[i].error == parallel[i].error;

    std::printf("%zu runs of %zu steps, %d threads\n", runs, configs.front().steps(), worker_threads());
    std::printf("serial    %8.3f s  (%.3f s/run)\n", serial_s, serial_s / static_cast<double>(runs));
    std::printf("parallel  %8.3f s  (%.3f s/run)\n", parallel_s, parallel_s / static_cast<double>(runs));
    std::printf("speedup   %8.2fx\n", serial_s / parallel_s);
    std::printf("results identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
