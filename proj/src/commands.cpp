#include "motility/commands.hpp"

#include "motility/config.hpp"
#include "motility/csv.hpp"
#include "motility/errors.hpp"

#include <fstream>
#include <map>
#include <ostream>

namespace motility {

namespace {

RunConfig load(RunManifest const& manifest)
{
    RunConfig config = manifest.config_path.empty() ? parse_config("")
                                                    : load_config(manifest.config_path);
    if (manifest.seed) {
        config.sim.seed = *manifest.seed;
    }
    return config;
}

std::ifstream open_input(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read input '" + path + "'");
    }
    return in;
}

// Writes through a callback so a failed run leaves no partial file behind
// under the final name.
template <typename Writer>
void write_output(RunManifest const& manifest, char const* name, std::ostream& log, Writer&& writer)
{
    std::filesystem::create_directories(manifest.output_dir);
    auto const path = manifest.output_dir / name;
    auto const partial = manifest.output_dir / (std::string(name) + ".part");
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + partial.string() + "'");
        }
        writer(out);
        out.flush();
        if (!out) {
            throw Error("write failed for '" + partial.string() + "'");
        }
    }
    std::filesystem::rename(partial, path);
    log << "wrote " << path.string() << '\n';
}

std::string const& single_input(RunManifest const& manifest, char const* what)
{
    if (manifest.input_paths.size() != 1) {
        throw InvalidConfig(std::string("expected exactly one --input ") + what + ", got " +
                            std::to_string(manifest.input_paths.size()));
    }
    return manifest.input_paths.front();
}

} // namespace

int cmd_simulate(RunManifest const& manifest, std::ostream& log)
{
    RunConfig const config = load(manifest);
    auto const tracks = run_assay(config.sim);
    write_output(manifest, output_file::trajectory, log,
                 [&](std::ostream& out) { csv::write_trajectory(out, tracks); });
    return exit_code::ok;
}

int cmd_analyze(RunManifest const& manifest, std::ostream& log)
{
    RunConfig const config = load(manifest);
    AnalysisParams const& analysis = config.analysis();

    auto in = open_input(single_input(manifest, "trajectory CSV"));
    auto const tracks = csv::read_trajectory(in);
    if (tracks.size() < 2) {
        throw Error("trajectory needs at least 2 markers, got " + std::to_string(tracks.size()));
    }

    auto const series = displacements(tracks, analysis.smoothing_window);
    std::vector<CorrelationFunction> functions;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = i; j < series.size(); ++j) {
            functions.push_back(cross_correlation(series[i], series[j], analysis.max_lag,
                                                  analysis.correlation_window));
        }
    }

    write_output(manifest, output_file::displacements, log,
                 [&](std::ostream& out) { csv::write_displacements(out, series); });
    write_output(manifest, output_file::correlation, log, [&](std::ostream& out) {
        csv::write_correlations(out, csv::correlation_rows(functions));
    });
    return exit_code::ok;
}

int cmd_fit(RunManifest const& manifest, std::ostream& log)
{
    RunConfig const config = load(manifest);
    if (manifest.input_paths.empty()) {
        throw InvalidConfig("fit needs at least one --input sweep CSV");
    }

    std::vector<SweepRecord> records;
    for (auto const& path : manifest.input_paths) {
        auto in = open_input(path);
        auto const part = csv::read_sweep(in);
        records.insert(records.end(), part.begin(), part.end());
    }

    std::map<double, std::vector<SweepRecord>> by_theta;
    for (SweepRecord const& r : records) {
        by_theta[r.theta_deg].push_back(r);
    }
    if (by_theta.empty()) {
        by_theta[0.0];
    }

    std::vector<csv::FitRow> rows;
    std::vector<std::pair<double, std::string>> failures;
    for (auto const& [theta, group] : by_theta) {
        try {
            PeakFit const fit = fit_peak(group);
            rows.push_back({theta, fit, report(fit)});
        } catch (FitError const& e) {
            failures.emplace_back(theta, e.what());
            log << "fit failed at theta_deg = " << csv::format_number(theta) << ": " << e.what()
                << '\n';
        }
    }

    write_output(manifest, output_file::fit, log,
                 [&](std::ostream& out) { csv::write_fits(out, rows); });
    write_output(manifest, output_file::angle_profile, log, [&](std::ostream& out) {
        csv::write_angle_profile(out, angle_profile(records, config.angle_bin_deg));
    });
    write_output(manifest, output_file::fit_report, log, [&](std::ostream& out) {
        for (csv::FitRow const& r : rows) {
            out << "theta_deg = " << csv::format_number(r.theta_deg) << '\n'
                << "  peak flux density      b_star_mt     = " << csv::format_number(r.report.b_star_mt) << '\n'
                << "  dipole moment density  m_a_per_m     = " << csv::format_number(r.report.m_a_per_m) << '\n'
                << "  monomer moment         moment_am2    = " << csv::format_number(r.report.moment_am2) << '\n'
                << "                         moment_bohr   = " << csv::format_number(r.report.moment_bohr) << '\n'
                << "  dipole interaction     interaction_j = " << csv::format_number(r.report.interaction_j) << '\n'
                << "  I(B) = alpha + beta*B + gamma*B^2, B in mT, I in nm^2\n"
                << "    alpha = " << csv::format_number(r.fit.alpha) << '\n'
                << "    beta  = " << csv::format_number(r.fit.beta) << '\n'
                << "    gamma = " << csv::format_number(r.fit.gamma) << '\n'
                << "    rms residual = " << csv::format_number(r.fit.residual_nm2) << '\n';
        }
        for (auto const& [theta, message] : failures) {
            out << "theta_deg = " << csv::format_number(theta) << "\n  fit failed: " << message
                << '\n';
        }
    });
    return failures.empty() ? exit_code::ok : exit_code::fit_failure;
}

int cmd_sweep(RunManifest const& manifest, std::ostream& log)
{
    RunConfig const config = load(manifest);
    SweepResult const result = sweep(config.sim, config.sweep);
    for (CellFailure const& f : result.failures) {
        log << "cell b_mt = " << csv::format_number(f.b_mt)
            << ", theta_deg = " << csv::format_number(f.theta_deg) << " failed: " << f.message
            << '\n';
    }
    write_output(manifest, output_file::sweep, log,
                 [&](std::ostream& out) { csv::write_sweep(out, result.records); });
    return result.failures.empty() ? exit_code::ok : exit_code::partial_sweep;
}

int run_command(RunManifest const& manifest, std::ostream& log)
{
    try {
        switch (manifest.command) {
        case Command::simulate:
            return cmd_simulate(manifest, log);
        case Command::analyze:
            return cmd_analyze(manifest, log);
        case Command::fit:
            return cmd_fit(manifest, log);
        case Command::sweep:
            return cmd_sweep(manifest, log);
        }
    } catch (InvalidConfig const& e) {
        log << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    } catch (FitError const& e) {
        log << "fit failed: " << e.what() << '\n';
        return exit_code::fit_failure;
    } catch (std::exception const& e) {
        log << "error: " << e.what() << '\n';
        return exit_code::failure;
    }
    return exit_code::failure;
}

} // namespace motility
