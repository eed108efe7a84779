// Command-line front end: five subcommands over the experiment library.
// Exit codes: 0 success, 2 config errors, 3 file/layout errors, 4 math
// errors, 1 anything else.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "covop/config.hpp"
#include "covop/errors.hpp"
#include "covop/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "covop: option discovery by connectivity maximization.\n"
        "Experiments are described by a plain-text config (see configs/ for "
        "presets\nand include/covop/config.hpp for the schema)."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool have_seed = false;
    bool plot = false;

    const char* descriptions[][2] = {
        {"discover", "write the discovered option set and its discovery log"},
        {"covertime", "estimate cover times per method (connectivity table)"},
        {"learn", "run learning curves for each configured method"},
        {"study", "random-graph connectivity/cover-time correlation study"},
        {"draw", "spectral drawing of the state graph (plus option edges)"},
    };
    for (const auto& [name, help] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        sub->add_option("--seed", seed_override, "override the master seed")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--out", out_override, "override the output directory");
        sub->add_flag("--plot", plot, "also emit SVG plots");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    covop::ExperimentConfig cfg;
    try {
        cfg = covop::experiment_from_config(covop::read_config(config_path));
    } catch (const covop::IoError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const covop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (have_seed) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (plot) cfg.plot = true;

    return covop::run_command(app.get_subcommands().front()->get_name(), cfg);
}
