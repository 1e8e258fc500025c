#pragma once

#include <cmath>
#include <stdexcept>

namespace flcsim {

inline constexpr double kDefaultSgnDelta = 0.05;

/// s / (|s| + delta): continuous stand-in for sgn(s) used by every
/// sliding-mode adaptation rule.
inline double smoothed_sign(double s, double delta = kDefaultSgnDelta) {
    if (!(delta > 0.0)) throw std::invalid_argument("smoothed_sign: delta must be positive");
    return s / (std::abs(s) + delta);
}

}  // namespace flcsim
