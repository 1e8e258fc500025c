#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "flcsim/simulation.hpp"

namespace flcsim {

enum class Execution { Serial, Parallel };

/// Calls body(i) for i in [0, n). Parallel spreads indices over OpenMP
/// threads; body must not touch shared mutable state and must not throw.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec);

int worker_threads() noexcept;

template <typename R>
struct Outcome {
    std::optional<R> value;
    std::string error;
    bool blew_up = false;
};

/**
 * Runs every scenario and reduces each trace with `fn` on the worker that
 * produced it, so only the reductions are kept. Errors are captured per
 * scenario. Results are in input order and identical for both executions.
 */
template <typename Fn>
auto map_scenarios(const std::vector<ScenarioConfig>& configs, Fn fn, Execution exec)
    -> std::vector<Outcome<std::invoke_result_t<Fn&, const RunTrace&>>> {
    using R = std::invoke_result_t<Fn&, const RunTrace&>;
    std::vector<Outcome<R>> out(configs.size());
    for_each_index(
        configs.size(),
        [&](std::size_t i) {
            try {
                const RunTrace trace = run_scenario(configs[i]);
                out[i].value = fn(trace);
            } catch (const SimulationError& e) {
                out[i].error = e.what();
                out[i].blew_up = true;
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        },
        exec);
    return out;
}

// ---------------------------------------------------------------------------

/// Disturbance-estimation MSE of type-1 vs type-2 networks under output noise.
struct MseTable {
    std::array<double, 3> snr_db{20.0, 40.0, 80.0};
    /// [0] type-1, [1] type-2; mean over the seeds that completed.
    std::array<std::array<double, 3>, 2> mse{};
    std::array<std::array<std::vector<double>, 3>, 2> per_seed;
    /// (type1 - type2) / type1 in percent.
    std::array<double, 3> improvement_pct{};
    std::size_t failures = 0;
    std::vector<std::string> failure_messages;
};

/// Reference cells reported with the original study (not reproducible bit-for-bit).
inline constexpr std::array<std::array<double, 3>, 2> kReportedMse{
    {{0.6084, 0.0133, 0.0016}, {0.5542, 0.0129, 0.0016}}};

/**
 * Runs `base` (normally the FLC-SLDO default preset) for every
 * (type, SNR, seed) cell with noise on the measured states and tabulates
 * the MSE of d_hat_sl against the true disturbance over the full horizon.
 */
MseTable mse_table(const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds,
                   Execution exec = Execution::Parallel,
                   std::array<double, 3> snr_db = {20.0, 40.0, 80.0});

std::string format_mse_table(const MseTable& table);

}  // namespace flcsim
