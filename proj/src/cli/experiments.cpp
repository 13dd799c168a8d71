#include "monospde/analysis.hpp"
#include "monospde/cli.hpp"
#include "monospde/coupling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace monospde::cli {

using nlohmann::json;

bool Outcome::pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

namespace {

json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"se", e.se}, {"count", e.count}}; }

json fit_json(const RateFit& f) {
    return {{"fitted", f.fitted},         {"fitted_se", f.fitted_se}, {"target", f.target},
            {"relative_error", f.relative_error}, {"r_squared", f.r_squared},
            {"points", f.ordinate.size()}, {"fit_warning", f.fit_warning}, {"skipped", f.skipped},
            {"note", f.note}};
}

Vector unit_mode(const SdeProblem& problem, int k = 0) { return problem.space().eigenvectors().col(k); }

// Symmetric pair about the origin along e_1 with |x - y|_H = d.
std::pair<Vector, Vector> symmetric_pair(const SdeProblem& problem, double d) {
    const Vector e = unit_mode(problem);
    return {0.5 * d * e, -0.5 * d * e};
}

EnsembleSpec ensemble_spec(const ExperimentConfig& cfg, Execution exec) {
    EnsembleSpec spec;
    spec.dt = cfg.run.dt;
    spec.n_paths = cfg.run.n_paths;
    spec.seed = cfg.run.seed;
    spec.exec = exec;
    return spec;
}

// times[j] = j * span / count on the dt grid.
std::vector<double> even_times(double span, std::size_t count, double dt) {
    std::vector<double> t;
    for (std::size_t j = 1; j <= count; ++j) {
        const double raw = span * static_cast<double>(j) / static_cast<double>(count);
        const double snapped = std::max(1.0, std::round(raw / dt)) * dt;
        if (t.empty() || snapped > t.back()) t.push_back(snapped);
    }
    return t;
}

Outcome run_simulate(const ExperimentConfig& cfg, const SdeProblem& problem) {
    const double r = cfg.params.x0_norms.empty() ? 1.0 : cfg.params.x0_norms.front();
    Rng rng = make_rng(cfg.run.seed, Stream::Paths, 0);
    const Trajectory tr = simulate(problem, r * unit_mode(problem), cfg.run.T, cfg.run.dt, rng);
    const int shown = std::min(problem.space().size(), 4);
    Table table{"trajectory.csv", {"t", "norm_h", "norm_v"}, {}};
    for (int k = 0; k < shown; ++k) table.columns.push_back("mode_" + std::to_string(k + 1));
    const std::size_t stride = std::max<std::size_t>(1, tr.times.size() / 10000);
    for (std::size_t i = 0; i < tr.times.size(); i += stride) {
        std::vector<double> row{tr.times[i], tr.norm_h[i], tr.norm_v[i]};
        const Vector c = problem.space().to_modes(tr.states[i]);
        for (int k = 0; k < shown; ++k) row.push_back(c(k));
        table.rows.push_back(std::move(row));
    }
    Outcome out;
    out.results = {{"x0_norm", r},
                   {"final_norm_h", tr.norm_h.back()},
                   {"final_norm_v", tr.norm_v.back()},
                   {"ledger",
                    {{"steps", tr.ledger.steps},
                     {"violations", tr.ledger.violations},
                     {"max_excess", tr.ledger.max_excess}}}};
    out.verdicts["energy_ledger"] = tr.ledger.violations == 0;
    out.tables.push_back(std::move(table));
    return out;
}

Outcome run_couple(const ExperimentConfig& cfg, const SdeProblem& problem, Execution exec) {
    const double d = cfg.params.distance.value_or(0.2);
    if (!(d > 0.0)) throw ConfigError("couple: need params.distance > 0");
    const auto [x, y] = symmetric_pair(problem, d);
    const EnsembleSpec spec = ensemble_spec(cfg, exec);
    const CouplingParams params = make_params(problem, x, y, cfg.run.T, cfg.run.dt);
    const auto records = coupled_ensemble(problem, params, x, y, spec);
    const CoupledSummary sum = summarize(records, params, problem.sigma);
    const GirsanovMomentReport gm = girsanov_moment(records, params, problem.sigma, cfg.params.p);

    // Weighted law from the same coupled records against an independent direct ensemble.
    EnsembleSpec direct_spec = spec;
    direct_spec.stream = Stream::PathsAlt;
    const auto direct_states = final_states(problem, y, cfg.run.T, direct_spec);
    const TestFunction bump = TestFunction::gaussian_bump();
    json laws = json::object();
    for (const auto& [name, F] : {std::pair{std::string("constant"), TestFunction::constant(1.0)},
                                  std::pair{std::string("gaussian_bump"), bump}}) {
        std::vector<double> w;
        std::vector<double> dv;
        for (const auto& rec : records) w.push_back(rec.R * F(problem.space(), rec.y_final));
        for (const auto& s : direct_states) dv.push_back(F(problem.space(), s));
        const Estimate we = mean_and_se(w);
        const Estimate de = mean_and_se(dv);
        const double se = std::hypot(we.se, de.se);
        const double z = se > 0.0 ? std::abs(we.mean - de.mean) / se : 0.0;
        laws[name] = {{"weighted", estimate_json(we)}, {"direct", estimate_json(de)}, {"z_score", z}};
        laws[name]["pass"] = z <= 3.0;
    }

    Table table{"coupling.csv", {"path_id", "tau", "R", "quad_var", "coupled"}, {}};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        table.rows.push_back({static_cast<double>(i), r.tau, r.R, r.quad_var, r.coupled ? 1.0 : 0.0});
    }

    Outcome out;
    out.results = {{"distance", d},
                   {"epsilon", params.epsilon},
                   {"c_const", params.c_const},
                   {"beta0", params.beta.front()},
                   {"lemma_integral", params.lemma_integral},
                   {"lemma_target", params.lemma_target},
                   {"couple_tol", params.couple_tol},
                   {"coupled_fraction", sum.coupled_fraction},
                   {"R", estimate_json(sum.R)},
                   {"max_quad_var", sum.max_quad_var},
                   {"quad_var_bound", sum.quad_var_bound},
                   {"quad_var_violations", sum.quad_var_violations},
                   {"weighted_law", laws},
                   {"girsanov_moment",
                    {{"p", gm.p},
                     {"exponent", gm.exponent},
                     {"empirical", estimate_json(gm.empirical)},
                     {"bound", gm.bound},
                     {"heavy_tail_warning", gm.heavy_tail_warning}}}};
    out.verdicts["coupled_fraction"] = sum.coupled_fraction >= 0.99;
    out.verdicts["density_mean_one"] = std::abs(sum.R.mean - 1.0) <= 3.0 * sum.R.se;
    out.verdicts["quad_var_bound"] = sum.quad_var_violations == 0;
    out.verdicts["weighted_law_constant"] = laws["constant"]["pass"].get<bool>();
    out.verdicts["weighted_law_bump"] = laws["gaussian_bump"]["pass"].get<bool>();
    out.verdicts["girsanov_moment"] = gm.pass;
    out.tables.push_back(std::move(table));
    return out;
}

Outcome run_harnack(const ExperimentConfig& cfg, const SdeProblem& problem, Execution exec) {
    const double d = cfg.params.distance.value_or(0.5);
    const auto [x, y] = symmetric_pair(problem, d);
    const TestFunction F = TestFunction::from_name(cfg.params.test_function);
    const HarnackReport rep =
        verify_harnack(problem, x, y, cfg.run.T, cfg.params.p, F, ensemble_spec(cfg, exec));
    Outcome out;
    out.results = {{"p", rep.p},
                   {"T", rep.T},
                   {"sigma", rep.sigma},
                   {"distance", rep.distance},
                   {"constant", rep.constant},
                   {"distance_exponent", harnack_distance_exponent(problem.alpha(), rep.sigma)},
                   {"test_function", rep.f_id},
                   {"mean_f_y", estimate_json(rep.mean_f_y)},
                   {"mean_fp_x", estimate_json(rep.mean_fp_x)},
                   {"lhs", rep.lhs},
                   {"lhs_se", rep.lhs_se},
                   {"rhs_factor", rep.rhs_factor},
                   {"rhs", rep.rhs},
                   {"rhs_se", rep.rhs_se},
                   {"power_warning", rep.power_warning}};
    if (rep.exact) {
        out.results["exact"] = {{"lhs", rep.exact->lhs},
                                {"rhs_moment", rep.exact->rhs_moment},
                                {"rhs", rep.exact->rhs},
                                {"holds", rep.exact->holds}};
        out.verdicts["exact_quadrature"] = rep.exact->holds;
    }
    out.verdicts["harnack"] = rep.pass;
    out.tables.push_back(Table{"harnack.csv",
                               {"p", "T", "sigma", "distance", "constant", "lhs", "lhs_se", "rhs",
                                "rhs_se", "rhs_factor", "pass"},
                               {{rep.p, rep.T, rep.sigma, rep.distance, rep.constant, rep.lhs,
                                 rep.lhs_se, rep.rhs, rep.rhs_se, rep.rhs_factor, rep.pass ? 1.0 : 0.0}}});
    return out;
}

Outcome run_decay(const ExperimentConfig& cfg, const SdeProblem& problem) {
    if (!(problem.alpha() > 2.0)) throw ConfigError("decay: needs a drift with alpha > 2");
    std::vector<double> norms = cfg.params.x0_norms;
    if (norms.empty()) norms = {1000.0, 1000.0, 100.0, 10.0, 1.0};
    std::vector<double> times = cfg.params.times;
    if (times.empty()) times = {1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 30.0, 50.0, 100.0};
    const auto& space = problem.space();
    const Vector e1 = unit_mode(problem, 0);
    const Vector e2 = unit_mode(problem, 1);
    std::vector<Vector> x0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        // Alternating signs put the two largest starts on opposite sides of the origin.
        Vector v = e1 + 0.25 * static_cast<double>(i) * e2;
        v /= space.norm_h(v);
        x0.push_back((i % 2 == 0 ? 1.0 : -1.0) * norms[i] * v);
    }
    const DecayFit fit = fit_decay(problem, x0, times, cfg.run.dt);
    Table table{"decay.csv", {"t", "sup_norm", "sup_pair_sq"}, {}};
    for (std::size_t j = 0; j < fit.norm.abscissa.size(); ++j) {
        const double pair = j < fit.pair.ordinate.size() ? fit.pair.ordinate[j] : 0.0;
        table.rows.push_back({fit.norm.abscissa[j], fit.norm.ordinate[j], pair});
    }
    Outcome out;
    out.results = {{"x0_norms", norms}, {"norm", fit_json(fit.norm)}, {"pair", fit_json(fit.pair)}};
    out.verdicts["norm_exponent"] = !fit.norm.skipped && fit.norm.relative_error <= 0.1;
    out.verdicts["pair_exponent"] = !fit.pair.skipped && fit.pair.relative_error <= 0.1;
    out.tables.push_back(std::move(table));
    return out;
}

Outcome run_contraction(const ExperimentConfig& cfg, const SdeProblem& problem, Execution exec) {
    if (problem.alpha() != 2.0) throw ConfigError("contraction: needs a drift with alpha = 2");
    const double d = cfg.params.distance.value_or(1.0);
    const auto [x, y] = symmetric_pair(problem, d);
    const double rate = (problem.c0 * problem.drift->delta() - problem.drift->gamma()) / 2.0;
    std::vector<double> times = cfg.params.times;
    if (times.empty()) times = even_times(2.0 / rate, 10, cfg.run.dt);
    const RateFit fit = fit_contraction(problem, x, y, times, ensemble_spec(cfg, exec));
    Table table{"contraction.csv", {"t", "distance", "se"}, {}};
    for (std::size_t j = 0; j < fit.abscissa.size(); ++j)
        table.rows.push_back({fit.abscissa[j], fit.ordinate[j], fit.ordinate_se[j]});
    Outcome out;
    out.results = {{"distance", d}, {"fit", fit_json(fit)}};
    if (fit.skipped) {
        out.verdicts["rate"] = d == 0.0;
    } else if (problem.drift->kind() == DriftKind::Linear) {
        out.verdicts["rate"] = fit.relative_error <= 0.02;
    } else {
        out.verdicts["rate"] = fit.fitted <= fit.target + 0.05 * std::abs(fit.target);
    }
    out.tables.push_back(std::move(table));
    return out;
}

InvariantOptions invariant_options(const ExperimentConfig& cfg) {
    InvariantOptions o;
    o.burn_in = cfg.run.burn_in;
    o.horizon = cfg.run.horizon;
    o.dt = cfg.run.invariant_dt;
    o.eps0 = cfg.params.eps0;
    return o;
}

Outcome run_invariant(const ExperimentConfig& cfg, const SdeProblem& problem) {
    const InvariantOptions opts = invariant_options(cfg);
    Rng rng_a = make_rng(cfg.run.seed, Stream::Invariant, 0);
    Rng rng_b = make_rng(cfg.run.seed, Stream::Invariant, 1);
    const InvariantEstimate a = estimate_invariant(problem, opts, rng_a);
    InvariantOptions opts_b = opts;
    opts_b.eps0 = a.eps0;  // same order for the seed-stability comparison
    const InvariantEstimate b = estimate_invariant(problem, opts_b, rng_b);

    Outcome out;
    const DensityBound db = density_bound(a, Vector::Zero(problem.space().size()), cfg.run.T,
                                          cfg.params.p, problem);
    json modes = json::array();
    for (const auto& m : a.mode_second_moments) modes.push_back(estimate_json(m));
    out.results = {{"moment_v_alpha", estimate_json(a.moment_v_alpha)},
                   {"energy_bound", a.energy_bound},
                   {"second_moment_h", estimate_json(a.second_moment_h)},
                   {"mode_second_moments", modes},
                   {"eps0", a.eps0},
                   {"eps0_threshold", a.eps0_threshold},
                   {"exp_moment", estimate_json(a.exp_moment)},
                   {"exp_moment_repeat", estimate_json(b.exp_moment)},
                   {"exp_overflow", a.exp_overflow},
                   {"autocorrelation_time", a.autocorrelation_time},
                   {"samples", a.samples.size()},
                   {"ledger", {{"steps", a.ledger.steps}, {"violations", a.ledger.violations}}},
                   {"density_bound",
                    {{"x", "origin"},
                     {"t", cfg.run.T},
                     {"p", cfg.params.p},
                     {"value", db.value},
                     {"effective_samples", db.effective_samples},
                     {"sample_warning", db.sample_warning}}}};
    out.verdicts["energy_ledger"] = a.ledger.violations == 0;
    out.verdicts["energy_bound"] =
        a.moment_v_alpha.mean <= a.energy_bound + 3.0 * a.moment_v_alpha.se;
    const bool finite = !a.exp_overflow && !b.exp_overflow && std::isfinite(a.exp_moment.mean) &&
                        std::isfinite(b.exp_moment.mean);
    out.verdicts["exp_moment_finite"] = finite;
    out.verdicts["exp_moment_seed_stable"] =
        finite && std::abs(a.exp_moment.mean - b.exp_moment.mean) <=
                      3.0 * std::hypot(a.exp_moment.se, b.exp_moment.se);
    if (problem.drift->kind() == DriftKind::Linear) {
        const double exact = problem.hs_norm_sq() / (2.0 * problem.drift->lambda());
        out.results["second_moment_exact"] = exact;
        out.verdicts["second_moment_exact"] =
            std::abs(a.second_moment_h.mean - exact) <= 3.0 * a.second_moment_h.se;
    }

    Table hist{"invariant_histogram.csv", {"bin_lo", "bin_hi", "density"}, {}};
    const double width = (a.histogram.hi - a.histogram.lo) / static_cast<double>(a.histogram.density.size());
    for (std::size_t i = 0; i < a.histogram.density.size(); ++i) {
        const double lo = a.histogram.lo + width * static_cast<double>(i);
        hist.rows.push_back({lo, lo + width, a.histogram.density[i]});
    }
    Table mtab{"invariant_modes.csv", {"mode", "second_moment", "se"}, {}};
    for (std::size_t k = 0; k < a.mode_second_moments.size(); ++k)
        mtab.rows.push_back({static_cast<double>(k + 1), a.mode_second_moments[k].mean,
                             a.mode_second_moments[k].se});
    out.tables.push_back(std::move(hist));
    out.tables.push_back(std::move(mtab));
    return out;
}

Outcome run_ergodic(const ExperimentConfig& cfg, const SdeProblem& problem, Execution exec) {
    const auto& space = problem.space();
    std::string obs = cfg.params.observable;
    if (obs.empty()) obs = "mode1";
    Observable F;
    if (obs == "mode1") {
        const Vector e1 = unit_mode(problem);
        F = [&space, e1](const Vector& v) { return space.inner(v, e1); };
    } else {
        F = TestFunction::from_name(obs).bind(space);
    }
    ErgodicOptions opts;
    opts.dt = cfg.run.dt;
    opts.n_paths = cfg.run.n_paths;
    opts.seed = cfg.run.seed;
    opts.exec = exec;
    opts.invariant = invariant_options(cfg);
    opts.times = cfg.params.times;
    std::vector<double> norms = cfg.params.x0_norms;
    if (norms.empty()) norms = {10.0, 3.0};
    std::vector<Vector> starts;
    for (std::size_t i = 0; i < norms.size(); ++i)
        starts.push_back((i % 2 == 0 ? 1.0 : -1.0) * norms[i] * unit_mode(problem));

    const ErgodicFit fit = fit_ergodic_rate(problem, F, starts, opts);
    Table table{"ergodic.csv", {"start", "t", "gap", "se"}, {}};
    json per = json::array();
    for (std::size_t s = 0; s < fit.per_start.size(); ++s) {
        const auto& f = fit.per_start[s];
        per.push_back(fit_json(f));
        for (std::size_t j = 0; j < f.abscissa.size(); ++j)
            table.rows.push_back({static_cast<double>(s), f.abscissa[j], f.ordinate[j], f.ordinate_se[j]});
    }
    Outcome out;
    out.results = {{"observable", obs},
                   {"x0_norms", norms},
                   {"mu_f", fit.mu_f},
                   {"mu_f_se", fit.mu_f_se},
                   {"eta", fit.eta},
                   {"eta_se", fit.eta_se},
                   {"target", fit.has_target ? json(fit.target) : json(nullptr)},
                   {"relative_error", fit.relative_error},
                   {"p_gap", fit.p_gap},
                   {"gap_implication", fit.gap_implication},
                   {"per_start", per}};
    if (fit.has_target && problem.drift->kind() == DriftKind::Linear) {
        out.verdicts["rate_matches_target"] = fit.relative_error <= 0.05;
    } else if (fit.has_target) {
        out.verdicts["rate_at_least_target"] = fit.eta + 3.0 * fit.eta_se >= 0.95 * fit.target;
    } else {
        out.verdicts["rate_positive"] = fit.positive_at_3se;
    }
    out.tables.push_back(std::move(table));
    return out;
}

Outcome run_constants(const ExperimentConfig& cfg, const SdeProblem& problem) {
    const double alpha = problem.alpha();
    const double sigma = problem.sigma;
    const double delta = problem.drift->delta();
    const double gamma = problem.drift->gamma();
    const double T = cfg.run.T;
    const double d = cfg.params.distance.value_or(0.5);
    const EnergyCoefficients ec = energy_coefficients(problem);

    Table table{"constants.csv", {"t", "closed_form", "quadrature", "relative_difference"}, {}};
    double worst = 0.0;
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double t = f * T;
        const double closed = harnack_constant(t, sigma, alpha, delta, problem.xi);
        const double quad = harnack_constant_quadrature(t, sigma, alpha, delta, problem.xi, gamma);
        const double rel = std::abs(closed - quad) / closed;
        worst = std::max(worst, rel);
        table.rows.push_back({t, closed, quad, rel});
    }
    Outcome out;
    out.results = {{"alpha", alpha},
                   {"sigma", sigma},
                   {"delta", delta},
                   {"gamma", gamma},
                   {"xi", problem.xi},
                   {"xi_closed_form", problem.xi_closed_form},
                   {"c0", problem.c0},
                   {"hs_norm_sq", problem.hs_norm_sq()},
                   {"op_norm_sq", problem.noise->op_norm_sq()},
                   {"epsilon", coupling_epsilon(alpha, sigma)},
                   {"distance_exponent", harnack_distance_exponent(alpha, sigma)},
                   {"harnack_constant", harnack_constant(T, sigma, alpha, delta, problem.xi)},
                   {"energy_c", ec.c},
                   {"energy_theta1", ec.theta1},
                   {"invariant_bound", ec.c / ec.theta1},
                   {"exp_moment_threshold", exp_moment_threshold(problem)},
                   {"closed_vs_quadrature_max_relative", worst}};
    if (d > 0.0) {
        const auto [x, y] = symmetric_pair(problem, d);
        const CouplingParams params = make_params(problem, x, y, T, cfg.run.dt);
        out.results["coupling"] = {{"distance", d},
                                   {"c_const", params.c_const},
                                   {"beta0", params.beta.front()},
                                   {"quad_var_bound", params.quad_var_bound(sigma)},
                                   {"girsanov_moment_bound",
                                    girsanov_moment_bound(params, sigma, cfg.params.p)}};
    }
    out.verdicts["closed_vs_quadrature"] = worst <= 1e-8;
    out.tables.push_back(std::move(table));
    return out;
}

}  // namespace

Outcome run_experiment(const ExperimentConfig& cfg, Execution exec) {
    SdeProblem problem;
    try {
        problem = build_problem(cfg.problem);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::string& e = cfg.experiment;
    if (e == "simulate") return run_simulate(cfg, problem);
    if (e == "couple") return run_couple(cfg, problem, exec);
    if (e == "harnack") return run_harnack(cfg, problem, exec);
    if (e == "decay") return run_decay(cfg, problem);
    if (e == "contraction") return run_contraction(cfg, problem, exec);
    if (e == "invariant") return run_invariant(cfg, problem);
    if (e == "ergodic") return run_ergodic(cfg, problem, exec);
    if (e == "constants") return run_constants(cfg, problem);
    throw ConfigError("experiment: unknown kind '" + e + "'");
}

std::string render_csv(const Table& table, const std::string& hash) {
    std::string text;
    for (const auto& c : table.columns) text += c + ",";
    text += "config_hash\n";
    char buf[40];
    for (const auto& row : table.rows) {
        for (double v : row) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            text += buf;
            text += ',';
        }
        text += hash + "\n";
    }
    return text;
}

json render_report(const ExperimentConfig& cfg, const Outcome& outcome) {
    return {{"schema_version", kSchemaVersion},
            {"tool_version", kToolVersion},
            {"experiment", cfg.experiment},
            {"config_hash", hash_hex(config_hash(cfg))},
            {"config", to_json(cfg)},
            {"results", outcome.results},
            {"verdicts", outcome.verdicts},
            {"pass", outcome.pass()}};
}

int run_to_directory(const ExperimentConfig& cfg, const std::string& out_dir, int workers) {
    namespace fs = std::filesystem;
    set_worker_count(workers);
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = run_experiment(cfg, Execution::Parallel);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(out_dir);
    const std::string hash = hash_hex(config_hash(cfg));
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + (fs::path(out_dir) / name).string() + "'");
        f << text;
    };
    json files = json::array({"report.json"});
    write("report.json", render_report(cfg, outcome).dump(2) + "\n");
    for (const auto& t : outcome.tables) {
        write(t.file, render_csv(t, hash));
        files.push_back(t.file);
    }
    const json manifest = {{"schema_version", kSchemaVersion},
                           {"tool_version", kToolVersion},
                           {"config_hash", hash},
                           {"master_seed", cfg.run.seed},
                           {"workers", worker_count()},
                           {"experiment", cfg.experiment},
                           {"verdicts", outcome.verdicts},
                           {"pass", outcome.pass()},
                           {"outputs", files},
                           {"wall_clock_seconds", wall}};
    write("manifest.json", manifest.dump(2) + "\n");
    return outcome.pass() ? 0 : 2;
}

}  // namespace monospde::cli
