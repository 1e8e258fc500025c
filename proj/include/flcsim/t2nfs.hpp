#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace flcsim {

/// Gaussian membership exp(-((xi - c) / sigma)^2). Throws unless sigma > 0.
double membership(double xi, double c, double sigma);

/// Centers and spreads of one membership family (lower or upper) for both
/// inputs: index 0 holds the I sets on xi1, index 1 the J sets on xi2.
struct MembershipFamily {
    std::array<std::vector<double>, 2> center;
    std::array<std::vector<double>, 2> sigma;

    bool operator==(const MembershipFamily&) const = default;
};

struct T2nfsInit {
    /// Centers are spread evenly over [-half_range, half_range].
    double half_range = 3.0;
    /// upper spread = ratio * lower spread
    double upper_spread_ratio = 1.3;
    double q0 = 0.5;
    double f0 = 0.0;
};

/**
 * @brief Adaptable parameters of the interval type-2 TSK network.
 *
 * Rule (i, j) pairs set i on xi1 with set j on xi2 and has constant
 * consequent f[i * J + j]. Shapes are fixed at construction.
 */
struct T2nfsParams {
    std::size_t I = 0;
    std::size_t J = 0;
    MembershipFamily lower;
    MembershipFamily upper;
    std::vector<double> f;
    double q = 0.5;
    double alpha = 0.03;

    static T2nfsParams make(std::size_t I, std::size_t J, double alpha, const T2nfsInit& init = {});

    double& f_at(std::size_t i, std::size_t j) { return f[i * J + j]; }
    double f_at(std::size_t i, std::size_t j) const { return f[i * J + j]; }
    std::size_t rules() const noexcept { return I * J; }

    /// Throws std::invalid_argument on inconsistent shapes or non-positive spreads.
    void validate() const;

    bool operator==(const T2nfsParams&) const = default;
};

struct FiringState {
    std::size_t I = 0;
    std::size_t J = 0;
    /// Raw products of memberships; these may underflow to 0 for inputs far
    /// from every center, the normalized values below never do.
    std::vector<double> w_lower;
    std::vector<double> w_upper;
    std::vector<double> w_norm_lower;
    std::vector<double> w_norm_upper;
    double tau_n = 0.0;
};

/// Firing strengths, their normalization and the q-weighted output.
FiringState forward(const T2nfsParams& params, double xi1, double xi2);

struct AdaptOptions {
    double sgn_delta = 0.05;
    /// |xi - c| below this freezes the spread rule; |F (W_lo - W_up)| below it
    /// freezes q; a combined-weight norm below it freezes the consequents.
    double guard_eps = 1e-6;
    double sigma_floor = 1e-3;
    /// A spread update larger than this fraction of the spread is skipped.
    double sigma_max_rel_step = 0.1;
};

struct GuardCounters {
    std::size_t sigma_singular = 0;
    std::size_t sigma_step = 0;
    std::size_t sigma_floor = 0;
    std::size_t f_frozen = 0;
    std::size_t q_frozen = 0;

    std::size_t total() const noexcept {
        return sigma_singular + sigma_step + sigma_floor + f_frozen + q_frozen;
    }
    GuardCounters& operator+=(const GuardCounters& o) noexcept;
};

struct AdaptResult {
    T2nfsParams params;
    GuardCounters guards;
};

/**
 * One Euler step of the sliding-mode adaptation rules, driven by the learning
 * error s through the smoothed sign:
 *
 *   c'     = xi' + xi alpha sgn(s)                      (both families)
 *   sigma' = -sigma/(xi - c) (xi + sigma^2/(xi - c)) alpha sgn(s)
 *   f_ij'  = -(q wl_ij + (1-q) wu_ij) / |q Wl + (1-q) Wu|^2  alpha sgn(s)
 *   q'     = -alpha sgn(s) / (F (Wl - Wu))
 *
 * All right-hand sides use the pre-step values. `firing` must come from
 * forward(params, xi1, xi2). Singular denominators freeze the affected
 * parameter for this step and are counted in the returned guards.
 */
AdaptResult adapt(const T2nfsParams& params, const FiringState& firing, double xi1, double xi2,
                  double xi1_rate, double xi2_rate, double s, double dt,
                  const AdaptOptions& options = {});

/// Finite-difference rate of tau_n between two parameter sets at fixed inputs.
double tau_n_rate_oracle(const T2nfsParams& before, const T2nfsParams& after, double xi1,
                         double xi2, double dt);

/// Collapses the upper family onto the lower one; q is kept but no longer
/// influences the output.
T2nfsParams to_type1(const T2nfsParams& params);

bool is_type1(const T2nfsParams& params);

/// Flat (path, value) table. Order: c_lower, c_upper, sigma_lower,
/// sigma_upper (each input 0 then input 1, by set index), f row-major, q, alpha.
std::vector<std::pair<std::string, double>> to_table(const T2nfsParams& params);

/// Inverse of to_table for the given shape. Throws std::invalid_argument when
/// labels or row count do not match.
T2nfsParams from_table(std::size_t I, std::size_t J,
                       const std::vector<std::pair<std::string, double>>& rows);

}  // namespace flcsim
