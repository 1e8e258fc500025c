#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "flcsim/controllers.hpp"
#include "flcsim/plant.hpp"
#include "flcsim/t2nfs.hpp"

namespace flcsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NoiseChannels { Both, X1Only };

struct NoiseConfig {
    double snr_db = 40.0;
    std::uint64_t seed = 0;
    NoiseChannels channels = NoiseChannels::Both;
};

/**
 * @brief Declarative description of one closed-loop run.
 *
 * BNDO and SLDO run for every controller variant so traces always carry both
 * estimates; only FLC-BNDO and FLC-SLDO feed them back.
 */
struct ScenarioConfig {
    std::string plant = "benchmark";
    ControllerVariant variant = ControllerVariant::FlcSldo;
    double k1 = 3.0;
    double k2 = 5.0;
    double ki = 3.0;

    double l1 = 5.0;
    double l2 = 0.0;
    double eta = 10.0;
    double alpha = 0.03;

    std::size_t mf_i = 3;
    std::size_t mf_j = 3;
    T2nfsInit t2nfs_init;
    bool type1 = false;
    bool adapt = true;
    AdaptOptions adaptation;

    PlantState x0{1.0, 1.0};
    double dt = 0.001;
    double horizon = 60.0;
    Scheme scheme = Scheme::RK4;

    DisturbanceProfile disturbance = ZeroDisturbance{};
    std::optional<NoiseConfig> noise;

    /// x0 = (1,1), k = (3,5), ki = 3, l = (5,0), eta = 10, alpha = 0.03,
    /// q0 = 0.5, I = J = 3, dt = 1 ms, 60 s, three-phase disturbance, FLC-SLDO.
    static ScenarioConfig paper_default();

    /// Number of integration steps; the trace holds steps() + 1 records.
    std::size_t steps() const;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

/// Structured text (JSON) round trip. Missing keys take their paper_default()
/// values; unknown keys are rejected so typos do not silently fall back.
std::string to_json_string(const ScenarioConfig& config, int indent = 2);
ScenarioConfig config_from_json_string(const std::string& text);

/// Reads a config file, or the built-in "paper-default" preset when `path`
/// is exactly that string. Throws ConfigError.
ScenarioConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace flcsim
