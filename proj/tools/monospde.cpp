#include "monospde/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = monospde::cli;

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo verification of Harnack, coupling and ergodicity bounds for monotone SPDEs"};
    std::string config_path;
    std::string preset_name;
    std::string experiment;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int workers = 0;
    bool list = false;
    app.add_option("--config", config_path, "experiment configuration (JSON)");
    app.add_option("--preset", preset_name, "start from a built-in preset");
    app.add_option("--experiment", experiment, "override the experiment kind");
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--workers", workers, "worker threads (default: available parallelism)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--list-presets", list, "print the built-in presets and exit");
    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& p : cli::presets()) std::cout << p.name << "\n    " << p.summary << "\n";
        return 0;
    }
    try {
        if (!preset_name.empty() && !config_path.empty()) {
            std::cerr << "error: --config and --preset are mutually exclusive\n";
            return 1;
        }
        cli::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = cli::load_config(config_path);
        } else if (!preset_name.empty()) {
            cfg = cli::preset(preset_name);
        } else {
            std::cerr << "error: give --config or --preset (see --help)\n";
            return 1;
        }
        // Overrides are applied to the JSON form so they pass the same validation.
        if (!experiment.empty() || *seed_opt) {
            auto j = cli::to_json(cfg);
            if (!experiment.empty()) j["experiment"] = experiment;
            if (*seed_opt) j["run"]["seed"] = seed;
            cfg = cli::parse_config(j);
        }
        const int code = cli::run_to_directory(cfg, out_dir, workers);
        std::cout << cfg.experiment << ": " << (code == 0 ? "pass" : "FAIL") << " (" << out_dir
                  << "/report.json)\n";
        return code;
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
