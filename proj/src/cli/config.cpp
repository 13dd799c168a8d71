#include "monospde/cli.hpp"

#include "monospde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace monospde::cli {

using nlohmann::json;

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{"simulate", "couple",    "harnack", "decay",
                                                "contraction", "invariant", "ergodic", "constants"};
    return kinds;
}

namespace {

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, const std::string& where, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void read_seed(const json& j, std::uint64_t& seed) {
    if (!j.contains("seed")) return;
    const json& s = j.at("seed");
    require(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0),
            "run.seed: expected a non-negative integer");
    seed = s.get<std::uint64_t>();
}

void validate(const ExperimentConfig& cfg) {
    const auto& kinds = experiment_kinds();
    require(std::find(kinds.begin(), kinds.end(), cfg.experiment) != kinds.end(),
            "experiment: unknown kind '" + cfg.experiment + "'");
    const auto& d = cfg.problem.drift;
    require(d.kind == "reaction-diffusion" || d.kind == "p-laplace" || d.kind == "high-order" ||
                d.kind == "linear",
            "problem.drift.kind: unknown drift '" + d.kind + "'");
    const RunConfig& r = cfg.run;
    require(r.T > 0.0, "run.T: need T > 0");
    require(r.dt > 0.0, "run.dt: need dt > 0");
    require(r.n_paths >= 2, "run.n_paths: need at least 2 paths");
    require(r.burn_in >= 0.0, "run.burn_in: need burn_in >= 0");
    require(r.horizon > 0.0, "run.horizon: need horizon > 0");
    require(r.invariant_dt > 0.0, "run.invariant_dt: need invariant_dt > 0");
    require(cfg.params.p > 1.0, "params.p: need p > 1");
    if (cfg.params.distance)
        require(*cfg.params.distance >= 0.0, "params.distance: need distance >= 0");
    if (cfg.problem.sigma) {
        require(*cfg.problem.sigma >= 2.0, "problem.sigma: need sigma >= 2");
    }
    // Module-level preconditions: build everything once and translate failures.
    try {
        const SdeProblem problem = build_problem(cfg.problem);
        step_count(r.T, r.dt);
        step_count(r.horizon, r.invariant_dt);
        step_count(r.burn_in, r.invariant_dt);
        for (double t : cfg.params.times) step_count(t, r.dt);
        TestFunction::from_name(cfg.params.test_function);
        (void)problem;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    reject_unknown(j, "config", {"experiment", "preset", "problem", "run", "params"});
    ExperimentConfig cfg;
    if (j.contains("preset")) {
        std::string name;
        read(j, "preset", "config", name);
        cfg = preset(name);
    }
    read(j, "experiment", "config", cfg.experiment);
    if (j.contains("problem")) {
        const json& p = j.at("problem");
        reject_unknown(p, "problem", {"drift", "n", "theta", "scale", "sigma"});
        if (p.contains("drift")) {
            const json& d = p.at("drift");
            reject_unknown(d, "problem.drift", {"kind", "p", "p_tilde", "c", "m", "lambda"});
            read(d, "kind", "problem.drift", cfg.problem.drift.kind);
            read(d, "p", "problem.drift", cfg.problem.drift.p);
            read(d, "p_tilde", "problem.drift", cfg.problem.drift.p_tilde);
            read(d, "c", "problem.drift", cfg.problem.drift.c);
            read(d, "m", "problem.drift", cfg.problem.drift.m);
            read(d, "lambda", "problem.drift", cfg.problem.drift.lambda);
        }
        read(p, "n", "problem", cfg.problem.n);
        read(p, "theta", "problem", cfg.problem.theta);
        read(p, "scale", "problem", cfg.problem.scale);
        if (p.contains("sigma")) {
            double s = 0.0;
            read(p, "sigma", "problem", s);
            cfg.problem.sigma = s;
        }
    }
    if (j.contains("run")) {
        const json& r = j.at("run");
        reject_unknown(r, "run", {"T", "dt", "n_paths", "burn_in", "horizon", "invariant_dt", "seed"});
        read(r, "T", "run", cfg.run.T);
        read(r, "dt", "run", cfg.run.dt);
        read(r, "n_paths", "run", cfg.run.n_paths);
        read(r, "burn_in", "run", cfg.run.burn_in);
        read(r, "horizon", "run", cfg.run.horizon);
        read(r, "invariant_dt", "run", cfg.run.invariant_dt);
        read_seed(r, cfg.run.seed);
    }
    if (j.contains("params")) {
        const json& e = j.at("params");
        reject_unknown(e, "params",
                       {"p", "distance", "test_function", "observable", "times", "x0_norms", "eps0"});
        read(e, "p", "params", cfg.params.p);
        if (e.contains("distance") && !e.at("distance").is_null()) {
            double d = 0.0;
            read(e, "distance", "params", d);
            cfg.params.distance = d;
        }
        read(e, "test_function", "params", cfg.params.test_function);
        read(e, "observable", "params", cfg.params.observable);
        read(e, "times", "params", cfg.params.times);
        read(e, "x0_norms", "params", cfg.params.x0_norms);
        read(e, "eps0", "params", cfg.params.eps0);
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
    const auto& d = cfg.problem.drift;
    json j;
    j["experiment"] = cfg.experiment;
    if (!cfg.preset.empty()) j["preset"] = cfg.preset;
    j["problem"] = {{"drift",
                     {{"kind", d.kind}, {"p", d.p}, {"p_tilde", d.p_tilde}, {"c", d.c}, {"m", d.m},
                      {"lambda", d.lambda}}},
                    {"n", cfg.problem.n},
                    {"theta", cfg.problem.theta},
                    {"scale", cfg.problem.scale},
                    {"sigma", effective_sigma(cfg.problem)}};
    j["run"] = {{"T", cfg.run.T},
                {"dt", cfg.run.dt},
                {"n_paths", cfg.run.n_paths},
                {"burn_in", cfg.run.burn_in},
                {"horizon", cfg.run.horizon},
                {"invariant_dt", cfg.run.invariant_dt},
                {"seed", cfg.run.seed}};
    j["params"] = {{"p", cfg.params.p},
                   {"distance", cfg.params.distance ? json(*cfg.params.distance) : json(nullptr)},
                   {"test_function", cfg.params.test_function},
                   {"observable", cfg.params.observable},
                   {"times", cfg.params.times},
                   {"x0_norms", cfg.params.x0_norms},
                   {"eps0", cfg.params.eps0}};
    return j;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::vector<PresetInfo>& presets() {
    static const std::vector<PresetInfo> list{
        {"ou-1d",
         "linear drift A(u) = -u on n = 3 with B = I; every eigen-coordinate is a scalar OU. "
         "alpha = 2, N = |u|_H^2, delta = 2 lambda, gamma = 0, c0 = 1, xi = b^2 (exact), sigma = 2"},
        {"reaction-diffusion",
         "Laplacian plus -|u|^2 u on n = 16, B = (-Laplacian)^{-1/2}. alpha = 2, N = |u|_{1,2}^2, "
         "delta = 2, gamma = 0, c0 = lambda_1, xi = 1 (exact spectral identity), sigma = 2"},
        {"p-laplace",
         "discrete 4-Laplacian on n = 16, B = (-Laplacian)^{-1/2}. alpha = p = 4, N = |u|_{1,4}^4, "
         "delta = 2^{3-p} (edgewise monotonicity), gamma = 0, c0 = lambda_1, "
         "xi = 1 (Hölder over the edges), sigma = 4"},
        {"high-order",
         "(D^2)^T(|D^2 u|^2 D^2 u) on n = 16, B = (-Laplacian)^{-1/2}. alpha = p = 4, "
         "N = |u|_{2,4}^4, delta = 2^{3-p}, gamma = 0, c0 = smallest Gram eigenvalue of D^2, "
         "xi from the B-weighted Gram matrix, sigma = 4"},
    };
    return list;
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.preset = name;
    cfg.run.n_paths = 2000;
    auto& d = cfg.problem.drift;
    if (name == "ou-1d") {
        d.kind = "linear";
        d.lambda = 1.0;
        cfg.problem.n = 3;
        cfg.problem.theta = 0.0;
        cfg.problem.scale = 1.0;
        cfg.problem.sigma = 2.0;
        cfg.run.horizon = 2000.0;
    } else if (name == "reaction-diffusion") {
        d.kind = "reaction-diffusion";
        d.p = 4.0;
        d.c = 1.0;
        cfg.problem.n = 16;
        cfg.problem.theta = 0.5;
        cfg.problem.sigma = 2.0;
    } else if (name == "p-laplace") {
        d.kind = "p-laplace";
        d.p = 4.0;
        d.p_tilde = 2.0;
        d.c = 0.0;
        cfg.problem.n = 16;
        cfg.problem.theta = 0.5;
        cfg.problem.sigma = 4.0;
    } else if (name == "high-order") {
        d.kind = "high-order";
        d.m = 2;
        d.p = 4.0;
        d.p_tilde = 2.0;
        d.c = 0.0;
        cfg.problem.n = 16;
        cfg.problem.theta = 0.5;
        cfg.problem.sigma = 4.0;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return cfg;
}

double effective_sigma(const ProblemConfig& problem) {
    if (problem.sigma) return *problem.sigma;
    const double alpha = problem.drift.kind == "linear" || problem.drift.kind == "reaction-diffusion"
                             ? 2.0
                             : problem.drift.p;
    return std::max(2.0, alpha);
}

SdeProblem build_problem(const ProblemConfig& problem) {
    const auto& d = problem.drift;
    const int order = d.kind == "high-order" ? d.m : 1;
    SpacePtr space = build_space(problem.n, order);
    std::shared_ptr<const DriftModel> drift;
    if (d.kind == "reaction-diffusion") {
        drift = std::make_shared<const DriftModel>(DriftModel::reaction_diffusion(space, d.p, d.c));
    } else if (d.kind == "p-laplace") {
        drift = std::make_shared<const DriftModel>(DriftModel::p_laplace(space, d.p, d.p_tilde, d.c));
    } else if (d.kind == "high-order") {
        drift = std::make_shared<const DriftModel>(
            DriftModel::high_order(space, d.m, d.p, d.p_tilde, d.c));
    } else if (d.kind == "linear") {
        drift = std::make_shared<const DriftModel>(DriftModel::linear(space, d.lambda));
    } else {
        throw ConfigError("problem.drift.kind: unknown drift '" + d.kind + "'");
    }
    return SdeProblem::make(drift, build_noise(space, problem.theta, problem.scale),
                            effective_sigma(problem));
}

}  // namespace monospde::cli
