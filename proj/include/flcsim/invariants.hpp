#pragma once

#include <string>
#include <vector>

#include "flcsim/scenario.hpp"

namespace flcsim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct InvariantReport {
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const noexcept;
};

/**
 * Runtime invariant suite behind the `check` subcommand.
 *
 * Runs `base` (noise is stripped for the replay checks) and replays the
 * observers from the recorded trace, checking at every step:
 *   firing strengths normalized, spreads above the floor,
 *   tau = tau_c - tau_n and s = tau_c + xi2/l1 exactly,
 *   d_hat_bn = p + l x exactly and the replay matches the trace bit for bit.
 * Also reruns the scenario (with and without noise) and the batch runner in
 * both execution modes and compares trace hashes, and bounds total runtime.
 */
InvariantReport run_invariant_suite(const ScenarioConfig& base, double time_budget_s = 60.0);

}  // namespace flcsim
