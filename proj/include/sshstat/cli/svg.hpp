#pragma once

#include <string>
#include <vector>

#include "sshstat/detect.hpp"

namespace sshstat::cli {

// Renders stratum summary points as a standalone SVG scatter plot.
// Circle area is proportional to stratum size; fill is a grayscale ramp
// with dark = high q_h. Output is a pure function of the inputs.
std::string scatter_svg(const std::vector<ScatterDatum>& data,
                        const std::string& x_label,
                        const std::string& y_label);

} // namespace sshstat::cli
