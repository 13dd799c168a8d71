// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "monospde/analysis.hpp"
#include "monospde/cli.hpp"
#include "monospde/drift.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace monospde;
namespace cli = monospde::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Experiments are shared between criteria, so they are run once and cached.
struct RunCache {
    std::map<std::string, std::pair<cli::Outcome, double>> runs;

    const cli::Outcome& get(const std::string& preset, const std::string& experiment,
                            const std::function<void(cli::ExperimentConfig&)>& tweak = {}) {
        const std::string key = preset + "/" + experiment + (tweak ? "/tweaked" : "");
        auto it = runs.find(key);
        if (it == runs.end()) {
            auto cfg = cli::preset(preset);
            cfg.experiment = experiment;
            if (tweak) tweak(cfg);
            const auto t0 = std::chrono::steady_clock::now();
            auto outcome = cli::run_experiment(cfg);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            it = runs.emplace(key, std::make_pair(std::move(outcome), secs)).first;
        }
        return it->second.first;
    }
    double seconds(const std::string& preset, const std::string& experiment, bool tweaked = false) {
        const auto it = runs.find(preset + "/" + experiment + (tweaked ? "/tweaked" : ""));
        return it == runs.end() ? 0.0 : it->second.second;
    }
};

RunCache cache;
const std::vector<std::string> kAllPresets{"ou-1d", "reaction-diffusion", "p-laplace", "high-order"};

Verdict edgewise_inequality() {
    Rng rng(20240601);
    std::uniform_int_distribution<int> dim(1, 64);
    std::uniform_real_distribution<double> rexp(0.0, 6.0);
    std::uniform_real_distribution<double> mag(-2.0, 2.0);
    std::normal_distribution<double> normal;
    long violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    const long samples = 100000;
    for (long s = 0; s < samples; ++s) {
        const int d = dim(rng);
        const double r = rexp(rng);
        Vector a(d);
        Vector b(d);
        for (int i = 0; i < d; ++i) a(i) = normal(rng);
        if (s % 5 == 0) {
            b = -a * std::pow(10.0, mag(rng));
        } else {
            for (int i = 0; i < d; ++i) b(i) = normal(rng);
        }
        a *= std::pow(10.0, mag(rng));
        b *= std::pow(10.0, mag(rng));
        const double scale = std::pow(a.norm() + b.norm(), r + 2.0);
        const double gap = lemma31_gap(a, b, r);
        worst = std::min(worst, gap / scale);
        if (gap < -1e-12 * scale) ++violations;
    }
    return {violations == 0,
            fmt("%ld pairs, dims 1-64, r in [0,6]: %ld violations, min scaled gap %.3g", samples,
                violations, worst)};
}

Verdict ou_exact_harnack() {
    int cells = 0;
    int holds = 0;
    double tightest = std::numeric_limits<double>::infinity();
    const auto F = [](double z) { return std::exp(-z * z); };
    for (double p : {2.0, 4.0})
        for (double T : {0.5, 1.0, 2.0})
            for (double d : {0.5, 1.0})
                for (const auto& [x, y] : {std::pair{d, 0.0}, std::pair{0.0, d}, std::pair{d / 2, -d / 2}}) {
                    const auto cell = ou_harnack_quadrature(1.0, 1.0, T, p, x, y, F);
                    ++cells;
                    if (cell.holds) ++holds;
                    tightest = std::min(tightest, cell.rhs / cell.lhs);
                }
    return {holds == cells, fmt("%d/%d cells hold exactly, smallest rhs/lhs %.4f", holds, cells, tightest)};
}

Verdict harnack_monte_carlo() {
    const auto& out = cache.get("p-laplace", "harnack", [](cli::ExperimentConfig& cfg) {
        cfg.run.n_paths = 10000;
        cfg.run.T = 1.0;
        cfg.params.distance = 0.5;
        cfg.params.test_function = "gaussian_bump";
    });
    const auto& r = out.results;
    return {out.verdicts.at("harnack"),
            fmt("p-laplace n=16 p=4 sigma=4, 10^4 paths, T=1, |x-y|=0.5: lhs %.5g +- %.1e <= rhs %.5g +- %.1e",
                r.at("lhs").get<double>(), r.at("lhs_se").get<double>(), r.at("rhs").get<double>(),
                r.at("rhs_se").get<double>())};
}

Verdict coupling_success() {
    bool ok = true;
    std::string detail;
    for (const char* p : {"ou-1d", "p-laplace"}) {
        const auto& out = cache.get(p, "couple");
        ok = ok && out.verdicts.at("coupled_fraction");
        detail += fmt("%s coupled %.4f; ", p, out.results.at("coupled_fraction").get<double>());
    }
    return {ok, detail};
}

Verdict girsanov_identities() {
    bool ok = true;
    std::string detail;
    for (const auto& p : kAllPresets) {
        const auto& out = cache.get(p, "couple");
        for (const char* v : {"density_mean_one", "weighted_law_constant", "weighted_law_bump", "girsanov_moment"}) {
            if (!out.verdicts.at(v)) {
                ok = false;
                detail += p + " " + v + " failed; ";
            }
        }
        const auto& R = out.results.at("R");
        detail += fmt("%s E[R]=%.4f+-%.4f; ", p.c_str(), R.at("mean").get<double>(), R.at("se").get<double>());
    }
    return {ok, detail};
}

Verdict contraction_rate() {
    const auto& lin = cache.get("ou-1d", "contraction");
    const auto& rd = cache.get("reaction-diffusion", "contraction");
    const auto& lf = lin.results.at("fit");
    const auto& rf = rd.results.at("fit");
    return {lin.verdicts.at("rate") && rd.verdicts.at("rate"),
            fmt("linear fitted %.5f vs %.5f (rel %.2e); reaction-diffusion fitted %.4f vs bound %.4f",
                lf.at("fitted").get<double>(), lf.at("target").get<double>(),
                lf.at("relative_error").get<double>(), rf.at("fitted").get<double>(),
                rf.at("target").get<double>())};
}

Verdict algebraic_decay() {
    const auto& p4 = cache.get("p-laplace", "decay");
    const auto& p3 = cache.get("p-laplace", "decay", [](cli::ExperimentConfig& cfg) {
        cfg.problem.drift.p = 3.0;
    });
    auto fit = [](const cli::Outcome& o, const char* which) {
        return o.results.at(which).at("fitted").get<double>();
    };
    const bool ok = p4.verdicts.at("norm_exponent") && p4.verdicts.at("pair_exponent") &&
                    p3.verdicts.at("norm_exponent");
    return {ok, fmt("p=4: norm %.4f (target -0.5), pair %.4f (target -1); p=3: norm %.4f (target -1)",
                    fit(p4, "norm"), fit(p4, "pair"), fit(p3, "norm"))};
}

Verdict comparison_ode() {
    const double c = 1.3;
    double worst = 0.0;
    for (double h0 : {0.5, 2.0, 40.0}) {
        const auto path = solve_comparison_ode(c, 4.0, h0, 3.0, 0.1);
        for (std::size_t i = 0; i < path.times.size(); ++i) {
            const double exact = h0 / (1.0 + c * h0 * path.times[i]);
            worst = std::max(worst, std::abs(path.values[i] / exact - 1.0));
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double h0 : {1e2, 1e4, 1e8}) {
        const double v = solve_comparison_ode(c, 4.0, h0, 1.0, 0.5).values.back();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double spread = hi / lo - 1.0;
    const double vs_envelope = std::abs(hi / comparison_envelope(c, 4.0, 1.0) - 1.0);
    return {worst <= 1e-8 && spread <= 0.01 && vs_envelope <= 0.01,
            fmt("max rel error %.2e vs h0/(1+c h0 t); h(1) spread over h0 in {1e2,1e4,1e8} %.3f%%, "
                "vs envelope %.3f%%",
                worst, 100.0 * spread, 100.0 * vs_envelope)};
}

Verdict invariant_measure() {
    bool ok = true;
    std::string detail;
    const auto& ou = cache.get("ou-1d", "invariant");
    ok = ok && ou.verdicts.at("second_moment_exact");
    detail += fmt("ou second moment %.4f+-%.4f vs %.4f; ",
                  ou.results.at("second_moment_h").at("mean").get<double>(),
                  ou.results.at("second_moment_h").at("se").get<double>(),
                  ou.results.at("second_moment_exact").get<double>());
    for (const auto& p : kAllPresets) {
        const auto& out = cache.get(p, "invariant");
        for (const char* v : {"energy_ledger", "energy_bound", "exp_moment_finite", "exp_moment_seed_stable"}) {
            if (!out.verdicts.at(v)) {
                ok = false;
                detail += p + " " + v + " failed; ";
            }
        }
    }
    if (ok) detail += "energy bound, finite and seed-stable exp moment on all presets";
    return {ok, detail};
}

Verdict ergodic_rate() {
    const auto& ou = cache.get("ou-1d", "ergodic");
    const auto& pl = cache.get("p-laplace", "ergodic");
    const double eta = pl.results.at("eta").get<double>();
    const double p = pl.results.at("p_gap").get<double>();
    const bool implication = pl.results.at("gap_implication").get<double>() == (p - 1.0) * eta / p;
    return {ou.verdicts.at("rate_matches_target") && pl.verdicts.at("rate_positive") && implication,
            fmt("ou eta %.4f vs %.4f (rel %.3f); p-laplace eta %.3f+-%.3f, gap implication %s",
                ou.results.at("eta").get<double>(), ou.results.at("target").get<double>(),
                ou.results.at("relative_error").get<double>(), eta,
                pl.results.at("eta_se").get<double>(), implication ? "consistent" : "inconsistent")};
}

Verdict constants() {
    double worst = 0.0;
    for (double sigma : {2.0, 3.0, 4.0, 6.0, 10.0})
        for (double alpha : {2.0, 2.5, 3.0, 4.0, 6.0})
            for (double t : {0.01, 0.5, 1.0, 4.0, 30.0})
                for (double dx : {0.3, 1.0, 7.0}) {
                    if (!(sigma > alpha - 2.0)) continue;
                    const double a = harnack_constant(t, sigma, alpha, dx, 1.0 / (1.0 + dx));
                    const double b = harnack_constant_quadrature(t, sigma, alpha, dx, 1.0 / (1.0 + dx), 0.0);
                    worst = std::max(worst, std::abs(a / b - 1.0));
                }
    const std::string c1 = fmt("%.6g", harnack_constant(1.0, 2.0, 2.0, 1.0, 1.0));
    const std::string c2 = fmt("%.6g", harnack_constant(4.0, 2.0, 2.0, 1.0, 1.0));
    const std::string c3 = fmt("%.6g", harnack_constant(1.0, 4.0, 3.0, 1.0, 1.0));
    const bool ok = worst <= 1e-8 && c1 == "16" && c2 == "1" && c3 == "11.3137";
    return {ok, fmt("closed vs quadrature max rel %.2e; values %s, %s, %s", worst, c1.c_str(), c2.c_str(),
                    c3.c_str())};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Every file must match byte for byte, except the run-specific manifest fields.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.insert(e.path().filename().string());
    for (const auto& e : fs::directory_iterator(b)) names.insert(e.path().filename().string());
    for (const auto& name : names) {
        if (!fs::exists(a / name) || !fs::exists(b / name)) {
            why = name + " missing";
            return false;
        }
        if (name == "manifest.json") {
            json ma = json::parse(slurp(a / name));
            json mb = json::parse(slurp(b / name));
            for (auto* m : {&ma, &mb}) {
                m->erase("wall_clock_seconds");
                m->erase("workers");
            }
            if (ma != mb) {
                why = name + " differs";
                return false;
            }
        } else if (slurp(a / name) != slurp(b / name)) {
            why = name + " differs";
            return false;
        }
    }
    return true;
}

Verdict determinism() {
    const fs::path root = fs::temp_directory_path() / "monospde_acceptance_determinism";
    fs::remove_all(root);
    int compared = 0;
    for (const auto& preset : kAllPresets) {
        for (const auto& experiment : cli::experiment_kinds()) {
            auto cfg = cli::preset(preset);
            cfg.experiment = experiment;
            cfg.run.n_paths = 100;
            cfg.run.horizon = std::min(cfg.run.horizon, 200.0);
            std::map<int, fs::path> dirs;
            try {
                for (int workers : {1, 3}) {
                    dirs[workers] = root / preset / experiment / ("w" + std::to_string(workers));
                    cli::run_to_directory(cfg, dirs[workers].string(), workers);
                }
            } catch (const cli::ConfigError&) {
                continue;  // experiment not applicable to this drift
            }
            std::string why;
            if (!same_outputs(dirs[1], dirs[3], why)) {
                set_worker_count(0);
                return {false, preset + "/" + experiment + ": " + why};
            }
            ++compared;
        }
    }
    set_worker_count(0);
    return {compared > 0, fmt("%d preset/experiment runs byte-identical with 1 and 3 workers", compared)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("criteria", only, "criterion numbers to run (default: all)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "edgewise inequality property suite", 10, edgewise_inequality},
        {2, "Harnack exact OU quadrature", 5, ou_exact_harnack},
        {3, "Harnack Monte Carlo, p-Laplace", 300, harnack_monte_carlo},
        {4, "coupling success", 120, coupling_success},
        {5, "Girsanov identities", 180, girsanov_identities},
        {6, "contraction rate", 60, contraction_rate},
        {7, "algebraic decay", 120, algebraic_decay},
        {8, "comparison ODE", 1, comparison_ode},
        {9, "invariant measure", 180, invariant_measure},
        {10, "ergodic rate", 300, ergodic_rate},
        {11, "Harnack constants", 10, constants},
        {12, "determinism across worker counts", 600, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        // Shared experiments count against every criterion that uses them.
        if (c.id == 4) secs = cache.seconds("ou-1d", "couple") + cache.seconds("p-laplace", "couple");
        if (c.id == 5) {
            secs = 0.0;
            for (const auto& p : kAllPresets) secs += cache.seconds(p, "couple");
        }
        const bool in_budget = secs <= c.budget_seconds;
        const bool pass = v.pass && in_budget;
        if (!pass) ++failures;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.title << " [" << fmt("%.1f", secs)
                  << " s / " << c.budget_seconds << " s" << (in_budget ? "" : ", over budget") << "]\n      "
                  << v.detail << "\n"
                  << std::flush;
    }
    std::cout << (failures == 0 ? "all criteria passed" : fmt("%d criteria failed", failures)) << "\n";
    return failures == 0 ? 0 : 1;
}
