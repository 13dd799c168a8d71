#include "monospde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monospde {

namespace {

constexpr std::size_t kMinFitPoints = 5;

void finish_fit(RateFit& fit, bool log_abscissa) {
    if (fit.ordinate.size() < kMinFitPoints) {
        fit.skipped = true;
        fit.fit_warning = true;
        fit.note = "fewer than 5 usable points";
        return;
    }
    std::vector<double> xs(fit.abscissa.size());
    std::vector<double> ys(fit.ordinate.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = log_abscissa ? std::log(fit.abscissa[i]) : fit.abscissa[i];
        ys[i] = std::log(fit.ordinate[i]);
    }
    const LinearFit lf = fit_line(xs, ys);
    fit.fitted = lf.slope;
    fit.fitted_se = lf.slope_se;
    fit.r_squared = lf.r_squared;
    fit.fit_warning = lf.r_squared < 0.98;
    if (fit.target != 0.0) fit.relative_error = std::abs(fit.fitted - fit.target) / std::abs(fit.target);
}

std::vector<std::size_t> grid_indices(const std::vector<double>& times, double dt) {
    std::vector<std::size_t> idx;
    for (double t : times) {
        const std::size_t k = step_count(t, dt);
        if (!idx.empty() && k <= idx.back())
            throw std::invalid_argument("fit: times must be strictly increasing");
        idx.push_back(k);
    }
    return idx;
}

}  // namespace

DecayFit fit_decay(const SdeProblem& problem, const std::vector<Vector>& x0_set,
                   const std::vector<double>& times, double dt, const ProxOptions& prox) {
    const double alpha = problem.alpha();
    if (!(alpha > 2.0)) throw std::invalid_argument("fit_decay: need alpha > 2");
    if (problem.drift->gamma() > 0.0) throw std::invalid_argument("fit_decay: need gamma <= 0");
    if (x0_set.empty()) throw std::invalid_argument("fit_decay: empty initial set");
    if (times.size() < kMinFitPoints || !(times.front() > 0.0) || times.back() < 10.0 * times.front())
        throw std::invalid_argument("fit_decay: need >= 5 positive times spanning a decade");
    const auto idx = grid_indices(times, dt);
    const auto& space = problem.space();
    const SdeProblem quiet = problem.without_noise();

    // states[i][j] = X_{times[j]}(x0_set[i]).
    std::vector<std::vector<Vector>> states(x0_set.size());
    for (std::size_t i = 0; i < x0_set.size(); ++i) {
        Stepper stepper(quiet, dt, prox);
        Vector x = x0_set[i];
        std::size_t k = 0;
        for (std::size_t target : idx) {
            for (; k < target; ++k) stepper.step(x, nullptr);
            states[i].push_back(x);
        }
    }

    DecayFit out;
    out.norm.target = -1.0 / (alpha - 2.0);
    out.pair.target = -2.0 / (alpha - 2.0);
    for (std::size_t j = 0; j < times.size(); ++j) {
        double sup_norm = 0.0;
        double sup_pair = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            sup_norm = std::max(sup_norm, space.norm_h(states[i][j]));
            for (std::size_t l = i + 1; l < states.size(); ++l) {
                const double d = space.norm_h(states[i][j] - states[l][j]);
                sup_pair = std::max(sup_pair, d * d);
            }
        }
        if (sup_norm > 0.0) {
            out.norm.abscissa.push_back(times[j]);
            out.norm.ordinate.push_back(sup_norm);
            out.norm.ordinate_se.push_back(0.0);
        }
        if (sup_pair > 0.0) {
            out.pair.abscissa.push_back(times[j]);
            out.pair.ordinate.push_back(sup_pair);
            out.pair.ordinate_se.push_back(0.0);
        }
    }
    finish_fit(out.norm, true);
    if (x0_set.size() < 2) {
        out.pair.skipped = true;
        out.pair.note = "pair fit needs two initial conditions";
    } else {
        finish_fit(out.pair, true);
    }
    return out;
}

RateFit fit_contraction(const SdeProblem& problem, const Vector& x, const Vector& y,
                        const std::vector<double>& times, const EnsembleSpec& spec) {
    if (problem.alpha() != 2.0) throw std::invalid_argument("fit_contraction: need alpha = 2");
    const double gap = problem.c0 * problem.drift->delta() - problem.drift->gamma();
    if (!(gap > 0.0)) throw std::invalid_argument("fit_contraction: need gamma < c0 delta");
    RateFit fit;
    fit.target = -gap / 2.0;
    if (problem.space().norm_h(x - y) == 0.0) {
        fit.skipped = true;
        fit.note = "x = y: exact coupling, all distances are 0";
        return fit;
    }
    const auto dist = same_noise_distances(problem, x, y, times, spec);
    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<double> logs;
        logs.reserve(dist.size());
        for (const auto& path : dist)
            if (path[j] > 0.0) logs.push_back(std::log(path[j]));
        if (logs.size() != dist.size()) continue;  // underflow at this time
        const Estimate e = mean_and_se(logs);
        fit.abscissa.push_back(times[j]);
        fit.ordinate.push_back(std::exp(e.mean));
        fit.ordinate_se.push_back(std::exp(e.mean) * e.se);
    }
    finish_fit(fit, false);
    return fit;
}

ErgodicFit fit_ergodic_rate(const SdeProblem& problem, const Observable& F,
                            const std::vector<Vector>& x_set, const ErgodicOptions& opts) {
    if (x_set.empty()) throw std::invalid_argument("fit_ergodic_rate: empty start set");
    if (!problem.noise) throw std::invalid_argument("fit_ergodic_rate: needs noise");
    ErgodicFit out;
    const double alpha = problem.alpha();
    if (alpha == 2.0) {
        const double gap = problem.c0 * problem.drift->delta() - problem.drift->gamma();
        if (!(gap > 0.0)) throw std::invalid_argument("fit_ergodic_rate: need gamma < c0 delta");
        out.target = gap / 2.0;
        out.has_target = true;
    } else if (problem.drift->gamma() > 0.0) {
        throw std::invalid_argument("fit_ergodic_rate: need gamma <= 0 for alpha > 2");
    }

    Rng inv_rng = make_rng(opts.seed, Stream::Invariant, 0);
    const InvariantEstimate inv = estimate_invariant(problem, opts.invariant, inv_rng);
    std::vector<double> mu_values;
    mu_values.reserve(inv.samples.size());
    for (const auto& s : inv.samples) mu_values.push_back(F(s));
    const Estimate mu = mean_and_se(mu_values);
    out.mu_f = mu.mean;
    out.mu_f_se = mu.se;

    std::vector<double> times = opts.times;
    if (times.empty()) {
        const double span = out.has_target ? 3.0 / out.target : 3.0 * inv.autocorrelation_time;
        for (int j = 1; j <= 10; ++j) {
            const double snapped = std::max(1.0, std::round(span * j / 10.0 / opts.dt)) * opts.dt;
            if (times.empty() || snapped > times.back()) times.push_back(snapped);
        }
    }

    EnsembleSpec spec;
    spec.dt = opts.dt;
    spec.n_paths = opts.n_paths;
    spec.seed = opts.seed;
    spec.exec = opts.exec;
    spec.prox = opts.invariant.prox;

    out.eta = std::numeric_limits<double>::infinity();
    out.positive_at_3se = true;
    bool any = false;
    for (std::size_t s = 0; s < x_set.size(); ++s) {
        spec.stream = Stream::Paths;
        const auto values = observe_paths(problem, x_set[s], times, F, spec);
        RateFit fit;
        fit.target = out.has_target ? -out.target : 0.0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            std::vector<double> col;
            col.reserve(values.size());
            for (const auto& path : values) col.push_back(path[j]);
            const Estimate e = mean_and_se(col);
            const double gap = std::abs(e.mean - out.mu_f);
            const double se = std::hypot(e.se, out.mu_f_se);
            // Only points where the bias is resolved above the Monte Carlo noise enter the fit.
            if (gap > 3.0 * se && gap > 0.0) {
                fit.abscissa.push_back(times[j]);
                fit.ordinate.push_back(gap);
                fit.ordinate_se.push_back(se);
            }
        }
        finish_fit(fit, false);
        if (!fit.skipped) {
            any = true;
            const double eta = -fit.fitted;
            if (eta < out.eta) {
                out.eta = eta;
                out.eta_se = fit.fitted_se;
            }
            if (!(eta - 3.0 * fit.fitted_se > 0.0)) out.positive_at_3se = false;
        } else {
            out.positive_at_3se = false;
        }
        out.per_start.push_back(std::move(fit));
    }
    if (!any) {
        out.eta = 0.0;
        out.positive_at_3se = false;
    }
    if (out.has_target && any) out.relative_error = std::abs(out.eta - out.target) / out.target;
    out.gap_implication = (out.p_gap - 1.0) * out.eta / out.p_gap;
    return out;
}

}  // namespace monospde
