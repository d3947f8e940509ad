#pragma once

// Plain-text run configuration: one `key = value` per line, `#` starts a
// comment, lists are comma separated. Units are part of the key name.
// Unknown keys are rejected.

#include "motility/simulator.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace motility {

struct RunConfig
{
    SimConfig sim;
    SweepOptions sweep;
    double angle_bin_deg = default_angle_bin_deg;

    AnalysisParams const& analysis() const { return sweep.analysis; }
};

/// Parses and validates configuration text. Throws ConfigParseError for
/// malformed lines and InvalidConfig for values that break a constraint.
RunConfig parse_config(std::string_view text);

RunConfig load_config(std::string const& path);

/// Every accepted key, in documentation order.
std::vector<std::string_view> config_keys();

} // namespace motility
