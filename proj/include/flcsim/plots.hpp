#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flcsim/simulation.hpp"

namespace flcsim {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line plot as a standalone SVG file.
void write_svg_plot(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<Series>& series);

/// Writes the comparison panels (states, control signals, disturbance
/// estimates, estimation signals, q, per-phase phase portraits) into `dir`.
/// `runs` pairs a legend label with each trace; the estimator panels use the
/// run labelled "sldo" when present, otherwise the first run. Returns the
/// written paths.
std::vector<std::string> write_figures(const std::vector<std::pair<std::string, const RunTrace*>>& runs,
                                       const std::string& dir);

}  // namespace flcsim
