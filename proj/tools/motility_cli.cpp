#include "motility/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using motility::Command;

    CLI::App app{"Speckled-filament motility assay: simulate, analyze, sweep, fit"};
    app.require_subcommand(1);

    motility::RunManifest manifest;
    std::uint64_t seed = 0;
    std::string out_dir = ".";

    auto add = [&](char const* name, char const* description, Command command) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", manifest.config_path, "key = value configuration file")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--input", manifest.input_paths, "input CSV file(s)")
            ->check(CLI::ExistingFile);
        sub->callback([&manifest, command] { manifest.command = command; });
        return sub;
    };
    add("simulate", "simulate one assay run and write trajectory.csv", Command::simulate);
    add("analyze", "decompose and correlate a trajectory CSV", Command::analyze);
    add("fit", "fit the intensity peak of sweep CSV(s)", Command::fit);
    add("sweep", "run the flux density / field angle sweep", Command::sweep);

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return motility::exit_code::config_error;
    }

    for (CLI::App const* sub : app.get_subcommands()) {
        if (sub->count("--seed") > 0) {
            manifest.seed = seed;
        }
    }
    manifest.output_dir = out_dir;
    return motility::run_command(manifest, std::cerr);
}
