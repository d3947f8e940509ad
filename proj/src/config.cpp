#include "motility/config.hpp"

#include "motility/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace motility {

namespace {

std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> items;
    while (true) {
        auto const comma = s.find(',');
        items.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return items;
}

class LineReader
{
public:
    explicit LineReader(int line) : _line{line} {}

    double real(std::string_view s) const
    {
        double value = 0;
        auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
            fail("expected a number, got '" + std::string(s) + "'");
        }
        return value;
    }

    long long integer(std::string_view s) const
    {
        long long value = 0;
        auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
            fail("expected an integer, got '" + std::string(s) + "'");
        }
        return value;
    }

    std::uint64_t unsigned_integer(std::string_view s) const
    {
        std::uint64_t value = 0;
        auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
            fail("expected a non-negative integer, got '" + std::string(s) + "'");
        }
        return value;
    }

    int small_integer(std::string_view s) const
    {
        auto const v = integer(s);
        if (v < -1'000'000'000 || v > 1'000'000'000) {
            fail("integer out of range: " + std::string(s));
        }
        return static_cast<int>(v);
    }

    bool boolean(std::string_view s) const
    {
        if (s == "true" || s == "yes" || s == "on" || s == "1") {
            return true;
        }
        if (s == "false" || s == "no" || s == "off" || s == "0") {
            return false;
        }
        fail("expected true/false, got '" + std::string(s) + "'");
    }

    std::vector<double> reals(std::string_view s) const
    {
        std::vector<double> out;
        for (auto item : split_list(s)) {
            out.push_back(real(item));
        }
        return out;
    }

    std::vector<int> integers(std::string_view s) const
    {
        std::vector<int> out;
        for (auto item : split_list(s)) {
            out.push_back(small_integer(item));
        }
        return out;
    }

    [[noreturn]] void fail(std::string const& message) const
    {
        throw ConfigParseError(_line, message);
    }

private:
    int _line;
};

using Setter = std::function<void(RunConfig&, std::string_view, LineReader const&)>;

struct Pending
{
    std::string coupling = "sin2";
    int coupling_line = 0;
    std::vector<std::pair<double, double>> table;
    int table_line = 0;
};

std::vector<std::pair<std::string_view, Setter>> const& setters()
{
    static std::vector<std::pair<std::string_view, Setter>> const table = {
        {"n_beads", [](RunConfig& c, auto v, auto const& r) { c.sim.n_beads = r.small_integer(v); }},
        {"bead_spacing_nm", [](RunConfig& c, auto v, auto const& r) { c.sim.bead_spacing_nm = r.real(v); }},
        {"bond_stiffness_n_per_m", [](RunConfig& c, auto v, auto const& r) { c.sim.bond_stiffness_n_per_m = r.real(v); }},
        {"bend_stiffness_j", [](RunConfig& c, auto v, auto const& r) { c.sim.bend_stiffness_j = r.real(v); }},
        {"drag_per_bead_ns_per_m", [](RunConfig& c, auto v, auto const& r) { c.sim.drag_per_bead_ns_per_m = r.real(v); }},
        {"propulsion_speed_nm_per_s", [](RunConfig& c, auto v, auto const& r) { c.sim.propulsion_speed_nm_per_s = r.real(v); }},
        {"kbt_j", [](RunConfig& c, auto v, auto const& r) { c.sim.kbt_j = r.real(v); }},
        {"m0_a_per_m", [](RunConfig& c, auto v, auto const& r) { c.sim.m0_a_per_m = r.real(v); }},
        {"dipole_relative_sigma", [](RunConfig& c, auto v, auto const& r) { c.sim.dipole_relative_sigma = r.real(v); }},
        {"dipole_corr_time_s", [](RunConfig& c, auto v, auto const& r) { c.sim.dipole_corr_time_s = r.real(v); }},
        {"cross_section_area_m2", [](RunConfig& c, auto v, auto const& r) { c.sim.cross_section_area_m2 = r.real(v); }},
        {"b_mt", [](RunConfig& c, auto v, auto const& r) { c.sim.b_mt = r.real(v); }},
        {"field_angle_deg", [](RunConfig& c, auto v, auto const& r) { c.sim.field_angle_deg = r.real(v); }},
        {"angle_coupling", {}},
        {"angle_coupling_table", {}},
        {"marker_beads", [](RunConfig& c, auto v, auto const& r) { c.sim.marker_beads = r.integers(v); }},
        {"localization_sigma_nm", [](RunConfig& c, auto v, auto const& r) { c.sim.localization_sigma_nm = r.real(v); }},
        {"pixel_pitch_nm", [](RunConfig& c, auto v, auto const& r) { c.sim.pixel_pitch_nm = r.real(v); }},
        {"quantize_to_pixels", [](RunConfig& c, auto v, auto const& r) { c.sim.quantize_to_pixels = r.boolean(v); }},
        {"dt_internal_s", [](RunConfig& c, auto v, auto const& r) { c.sim.dt_internal_s = r.real(v); }},
        {"frames", [](RunConfig& c, auto v, auto const& r) { c.sim.frames = r.small_integer(v); }},
        {"seed", [](RunConfig& c, auto v, auto const& r) { c.sim.seed = r.unsigned_integer(v); }},
        {"window_frames", [](RunConfig& c, auto v, auto const& r) { c.sweep.analysis.smoothing_window = r.small_integer(v); }},
        {"corr_window_frames", [](RunConfig& c, auto v, auto const& r) { c.sweep.analysis.correlation_window = r.small_integer(v); }},
        {"max_lag_frames", [](RunConfig& c, auto v, auto const& r) { c.sweep.analysis.max_lag = r.small_integer(v); }},
        {"pair", [](RunConfig& c, auto v, auto const& r) {
             auto const ids = r.integers(v);
             if (ids.size() != 2) {
                 r.fail("pair needs exactly two marker ids");
             }
             c.sweep.analysis.pair_first = ids[0];
             c.sweep.analysis.pair_second = ids[1];
         }},
        {"b_list_mt", [](RunConfig& c, auto v, auto const& r) { c.sweep.b_list_mt = r.reals(v); }},
        {"theta_list_deg", [](RunConfig& c, auto v, auto const& r) { c.sweep.theta_list_deg = r.reals(v); }},
        {"replicas", [](RunConfig& c, auto v, auto const& r) { c.sweep.replicas = r.small_integer(v); }},
        {"threads", [](RunConfig& c, auto v, auto const& r) { c.sweep.threads = r.small_integer(v); }},
        {"angle_bin_deg", [](RunConfig& c, auto v, auto const& r) { c.angle_bin_deg = r.real(v); }},
    };
    return table;
}

std::vector<std::string> analysis_problems(RunConfig const& config)
{
    std::vector<std::string> out;
    AnalysisParams const& a = config.sweep.analysis;
    if (a.smoothing_window < 3 || a.smoothing_window % 2 == 0) {
        out.push_back("window_frames: window must be odd and >= 3");
    }
    if (a.correlation_window < 2) {
        out.push_back("corr_window_frames: must be >= 2");
    }
    if (a.max_lag < 0 || a.max_lag >= a.correlation_window) {
        out.push_back("max_lag_frames: must lie in [0, corr_window_frames)");
    }
    auto const markers = static_cast<int>(config.sim.marker_beads.size());
    for (int id : {a.pair_first, a.pair_second}) {
        if (id < 1 || id > markers) {
            out.push_back("pair: marker id " + std::to_string(id) + " outside 1.." +
                          std::to_string(markers));
        }
    }
    if (config.sweep.b_list_mt.empty()) {
        out.push_back("b_list_mt: must not be empty");
    }
    for (double b : config.sweep.b_list_mt) {
        if (!(b >= 0) || !std::isfinite(b)) {
            out.push_back("b_list_mt: values must be finite and >= 0");
            break;
        }
    }
    if (config.sweep.theta_list_deg.empty()) {
        out.push_back("theta_list_deg: must not be empty");
    }
    if (config.sweep.replicas < 1) {
        out.push_back("replicas: must be >= 1");
    }
    if (config.sweep.threads < 1) {
        out.push_back("threads: must be >= 1");
    }
    if (!(config.angle_bin_deg > 0)) {
        out.push_back("angle_bin_deg: must be > 0");
    }
    return out;
}

} // namespace

std::vector<std::string_view> config_keys()
{
    std::vector<std::string_view> keys;
    for (auto const& [key, setter] : setters()) {
        keys.push_back(key);
    }
    return keys;
}

RunConfig parse_config(std::string_view text)
{
    RunConfig config;
    Pending pending;
    std::set<std::string, std::less<>> seen;

    int line_number = 0;
    while (!text.empty()) {
        ++line_number;
        auto const newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);

        if (auto const hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }

        LineReader const reader{line_number};
        auto const eq = line.find('=');
        if (eq == std::string_view::npos) {
            reader.fail("expected 'key = value'");
        }
        auto const key = trim(line.substr(0, eq));
        auto const value = trim(line.substr(eq + 1));
        if (key.empty()) {
            reader.fail("missing key");
        }
        if (value.empty()) {
            reader.fail("missing value for '" + std::string(key) + "'");
        }
        if (!seen.insert(std::string(key)).second) {
            reader.fail("duplicate key '" + std::string(key) + "'");
        }

        if (key == "angle_coupling") {
            pending.coupling = std::string(value);
            pending.coupling_line = line_number;
            continue;
        }
        if (key == "angle_coupling_table") {
            for (auto item : split_list(value)) {
                auto const colon = item.find(':');
                if (colon == std::string_view::npos) {
                    reader.fail("table entries are 'theta_deg:g', got '" + std::string(item) + "'");
                }
                pending.table.emplace_back(reader.real(trim(item.substr(0, colon))),
                                           reader.real(trim(item.substr(colon + 1))));
            }
            pending.table_line = line_number;
            continue;
        }

        auto const& table = setters();
        auto const it = std::find_if(table.begin(), table.end(),
                                     [&](auto const& entry) { return entry.first == key; });
        if (it == table.end()) {
            reader.fail("unknown key '" + std::string(key) + "'");
        }
        it->second(config, value, reader);
    }

    if (pending.coupling == "sin2") {
        config.sim.angle_coupling = AngleCoupling::sin2();
    } else if (pending.coupling == "cos2") {
        config.sim.angle_coupling = AngleCoupling::cos2();
    } else if (pending.coupling == "uniform") {
        config.sim.angle_coupling = AngleCoupling::uniform();
    } else if (pending.coupling == "table") {
        if (pending.table.empty()) {
            throw ConfigParseError(pending.coupling_line,
                                   "angle_coupling = table requires angle_coupling_table");
        }
        try {
            config.sim.angle_coupling = AngleCoupling::table(pending.table);
        } catch (InvalidConfig const& e) {
            throw ConfigParseError(pending.table_line, e.what());
        }
    } else {
        throw ConfigParseError(pending.coupling_line,
                               "angle_coupling must be sin2, cos2, uniform or table");
    }
    if (!pending.table.empty() && pending.coupling != "table") {
        throw ConfigParseError(pending.table_line,
                               "angle_coupling_table given but angle_coupling is not 'table'");
    }

    auto problems = config.sim.problems();
    auto const more = analysis_problems(config);
    problems.insert(problems.end(), more.begin(), more.end());
    if (!problems.empty()) {
        std::ostringstream message;
        message << "invalid configuration:";
        for (auto const& p : problems) {
            message << "\n  " << p;
        }
        throw InvalidConfig(message.str());
    }
    return config;
}

RunConfig load_config(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidConfig("cannot read config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace motility
