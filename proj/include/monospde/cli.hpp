#pragma once

#include "monospde/ensemble.hpp"
#include "monospde/integrator.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace monospde::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Invalid configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DriftConfig {
    std::string kind = "p-laplace";  // reaction-diffusion | p-laplace | high-order | linear
    double p = 4.0;
    double p_tilde = 2.0;
    double c = 0.0;
    int m = 2;
    double lambda = 1.0;
};

struct ProblemConfig {
    DriftConfig drift;
    int n = 16;
    double theta = 0.5;
    double scale = 1.0;
    std::optional<double> sigma;  // defaults to max(2, alpha)
};

struct RunConfig {
    double T = 1.0;
    double dt = 1e-3;
    std::size_t n_paths = 1000;
    double burn_in = 10.0;
    double horizon = 200.0;
    double invariant_dt = 1e-2;
    std::uint64_t seed = 1;
};

/// Experiment-specific knobs; empty vectors select per-experiment defaults.
struct ExperimentParams {
    double p = 2.0;
    std::optional<double> distance;  // |x - y|_H; per-experiment default when unset
    std::string test_function = "gaussian_bump";
    std::string observable;  // ergodic: mode1 (default) | gaussian_bump | smoothed_indicator | constant
    std::vector<double> times;
    std::vector<double> x0_norms;
    double eps0 = 0.0;
};

struct ExperimentConfig {
    std::string experiment = "harnack";
    std::string preset;  // informational
    ProblemConfig problem;
    RunConfig run;
    ExperimentParams params;
};

const std::vector<std::string>& experiment_kinds();

/// Parses and validates; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// FNV-1a over the canonical JSON dump of the configuration.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hash_hex(std::uint64_t h);

struct PresetInfo {
    std::string name;
    std::string summary;
};
const std::vector<PresetInfo>& presets();
ExperimentConfig preset(const std::string& name);

double effective_sigma(const ProblemConfig& problem);
SdeProblem build_problem(const ProblemConfig& problem);

struct Table {
    std::string file;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Outcome {
    nlohmann::json results;
    std::map<std::string, bool> verdicts;
    std::vector<Table> tables;

    bool pass() const;
};

/// Runs the configured experiment without touching the filesystem.
Outcome run_experiment(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);

/// CSV text with a trailing config_hash column.
std::string render_csv(const Table& table, const std::string& hash);
/// report.json content; contains only deterministic fields.
nlohmann::json render_report(const ExperimentConfig& cfg, const Outcome& outcome);

/// Runs and writes report.json, the CSV tables and manifest.json into out_dir.
/// Returns 0 when every verdict passes, 2 otherwise.
int run_to_directory(const ExperimentConfig& cfg, const std::string& out_dir, int workers);

}  // namespace monospde::cli
