#pragma once

// The four workflows behind the command-line tool. Each is a pure
// function of (inputs, config, seed) and writes its tables into the
// output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace motility {

enum class Command { simulate, analyze, fit, sweep };

struct RunManifest
{
    Command command = Command::simulate;
    std::string config_path; // empty: built-in defaults
    std::optional<std::uint64_t> seed;
    std::filesystem::path output_dir = ".";
    std::vector<std::string> input_paths;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config_error = 2;
inline constexpr int fit_failure = 3;
inline constexpr int partial_sweep = 4;
} // namespace exit_code

namespace output_file {
inline constexpr char const* trajectory = "trajectory.csv";
inline constexpr char const* displacements = "displacements.csv";
inline constexpr char const* correlation = "correlation.csv";
inline constexpr char const* sweep = "sweep.csv";
inline constexpr char const* fit = "fit.csv";
inline constexpr char const* fit_report = "fit_report.txt";
inline constexpr char const* angle_profile = "angle_profile.csv";
} // namespace output_file

int cmd_simulate(RunManifest const& manifest, std::ostream& log);
int cmd_analyze(RunManifest const& manifest, std::ostream& log);
int cmd_fit(RunManifest const& manifest, std::ostream& log);
int cmd_sweep(RunManifest const& manifest, std::ostream& log);

/// Dispatches on manifest.command and maps errors to exit codes.
int run_command(RunManifest const& manifest, std::ostream& log);

} // namespace motility
