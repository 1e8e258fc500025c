#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flcsim/scenario.hpp"
#include "flcsim/t2nfs.hpp"

namespace flcsim {

struct TraceRecord {
    double t = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double u = 0.0;
    double d_true = 0.0;
    double d_hat_bn = 0.0;
    double d_hat_sl = 0.0;
    double tau = 0.0;
    double tau_c = 0.0;
    double tau_n = 0.0;
    double s = 0.0;
    double q = 0.0;
    /// Number of adaptation guards that fired on this step.
    std::uint32_t guards = 0;

    bool operator==(const TraceRecord&) const = default;
};

struct TraceMetadata {
    std::string config_hash;
    std::string scheme;
    std::string variant;
    std::string code_version;
    GuardCounters guard_totals;
    double q_min = 0.0;
    double q_max = 0.0;
    /// Steps on which q left [0, 1].
    std::size_t q_excursions = 0;
};

struct RunTrace {
    std::vector<TraceRecord> records;
    TraceMetadata meta;
    T2nfsParams final_params;
};

const char* code_version() noexcept;

/// Blow-up during a run; `last_valid()` is the index of the last complete record.
class SimulationError : public NumericalError {
public:
    SimulationError(const std::string& what, std::size_t last_valid)
        : NumericalError(what, last_valid), last_valid_(last_valid) {}
    std::size_t last_valid() const noexcept { return last_valid_; }

private:
    std::size_t last_valid_;
};

/**
 * Runs the closed loop. Per step: measure (optionally noisy) states, update
 * the BNDO over the last interval, update the SLDO, evaluate the control law,
 * record, then integrate the plant over the next interval with u held.
 * Throws ConfigError for invalid configs and SimulationError on blow-up.
 */
RunTrace run_scenario(const ScenarioConfig& config);

// ---------------------------------------------------------------------------

using NoiseEngine = std::mt19937_64;

/// y + N(0, signal_power / 10^(snr_db/10)); an infinite snr_db returns y.
double inject_noise(double y, double snr_db, double signal_power, NoiseEngine& engine);

}  // namespace flcsim
