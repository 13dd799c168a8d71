#include "monospde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace monospde {

namespace {

double kappa_alpha(const SdeProblem& problem) {
    const int m = problem.drift->diff_order();
    if (m == 0) return 1.0;
    return power_embedding_constant(problem.space(), problem.alpha(), m);
}

void check_invariant_hypotheses(const SdeProblem& problem) {
    const double alpha = problem.alpha();
    const double gamma = problem.drift->gamma();
    if (alpha == 2.0 && !(gamma < problem.c0 * problem.drift->delta()))
        throw std::invalid_argument("invariant measure: need gamma < c0 delta");
    if (alpha > 2.0 && gamma > 0.0) throw std::invalid_argument("invariant measure: need gamma <= 0");
}

}  // namespace

double exp_moment_threshold(const SdeProblem& problem) {
    if (!problem.noise) throw std::invalid_argument("exp_moment_threshold: needs noise");
    return problem.drift->delta() * kappa_alpha(problem) /
           (problem.alpha() * problem.noise->op_norm_sq());
}

InvariantEstimate estimate_invariant(const SdeProblem& problem, const InvariantOptions& opts,
                                     Rng& rng) {
    check_invariant_hypotheses(problem);
    if (!problem.noise) throw std::invalid_argument("estimate_invariant: needs noise");
    if (!(opts.burn_in >= 0.0) || !(opts.horizon > 0.0))
        throw std::invalid_argument("estimate_invariant: need burn_in >= 0, horizon > 0");
    if (opts.batches < 2) throw std::invalid_argument("estimate_invariant: need >= 2 batches");
    const auto& space = problem.space();
    const auto& drift = *problem.drift;
    const int n = space.size();
    const double alpha = problem.alpha();
    const double dt = opts.dt;
    const std::size_t burn = step_count(opts.burn_in, dt);
    const std::size_t K = step_count(opts.horizon, dt);
    if (K < 2 * opts.batches) throw std::invalid_argument("estimate_invariant: horizon too short");

    InvariantEstimate est;
    est.burn_in = opts.burn_in;
    est.horizon = opts.horizon;
    est.eps0_threshold = exp_moment_threshold(problem);
    est.eps0 = opts.eps0 > 0.0 ? opts.eps0 : 0.5 * est.eps0_threshold;
    const EnergyCoefficients ec = energy_coefficients(problem);
    est.energy_bound = ec.c / ec.theta1;

    Stepper stepper(problem, dt, opts.prox);
    Vector x = Vector::Zero(n);
    for (std::size_t k = 0; k < burn; ++k) stepper.step(x, rng);

    std::vector<double> nv(K);
    std::vector<double> hnorm(K);
    std::vector<double> h2(K);
    std::vector<std::vector<double>> modes(static_cast<std::size_t>(n), std::vector<double>(K));
    std::vector<Vector> path;
    path.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double before = space.inner(x, x);
        const Vector prev = x;
        stepper.step(x, rng);
        const Vector& img = stepper.last_increment().image_h;
        const double after = space.inner(x, x);
        const double nx = drift.n_functional(x);
        const double bound = before + dt * (drift.gamma() * after - drift.delta() * nx) +
                             2.0 * space.inner(prev, img) + space.inner(img, img);
        const double excess = after - bound;
        est.ledger.max_excess = k == 0 ? excess : std::max(est.ledger.max_excess, excess);
        ++est.ledger.steps;
        if (excess > 1e-9 * (1.0 + before + after)) ++est.ledger.violations;

        nv[k] = nx;
        h2[k] = after;
        hnorm[k] = std::sqrt(after);
        const Vector c = space.to_modes(x);
        for (int j = 0; j < n; ++j) modes[static_cast<std::size_t>(j)][k] = c(j) * c(j);
        path.push_back(x);
    }

    est.moment_v_alpha = batch_mean_estimate(nv, opts.batches);
    est.second_moment_h = batch_mean_estimate(h2, opts.batches);
    for (const auto& m : modes) est.mode_second_moments.push_back(batch_mean_estimate(m, opts.batches));

    // Exponential moment; the default eps0 is halved until the exponent is representable.
    double max_norm = *std::max_element(hnorm.begin(), hnorm.end());
    const double top = std::pow(max_norm, alpha);
    while (est.eps0 * top > 700.0 && opts.eps0 <= 0.0) est.eps0 *= 0.5;
    if (est.eps0 * top > 700.0) {
        est.exp_overflow = true;
        est.exp_moment.mean = std::numeric_limits<double>::infinity();
        est.exp_moment.count = K;
    } else {
        std::vector<double> ev(K);
        for (std::size_t k = 0; k < K; ++k) ev[k] = std::exp(est.eps0 * std::pow(hnorm[k], alpha));
        est.exp_moment = batch_mean_estimate(ev, opts.batches);
    }

    // Integrated autocorrelation time of |X|_H^2 from the batch-means variance ratio.
    const Estimate plain = mean_and_se(h2);
    const double var = plain.se * plain.se * static_cast<double>(K);
    const double ratio = var > 0.0 ? std::pow(est.second_moment_h.se / plain.se, 2.0) : 1.0;
    est.autocorrelation_time = std::max(1.0, ratio) * dt;

    const double every = opts.sample_every > 0.0 ? opts.sample_every : 2.0 * est.autocorrelation_time;
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(every / dt)));
    for (std::size_t k = stride - 1; k < K; k += stride) est.samples.push_back(path[k]);

    if (opts.histogram_bins > 0) {
        est.histogram.lo = 0.0;
        est.histogram.hi = max_norm > 0.0 ? max_norm * (1.0 + 1e-12) : 1.0;
        est.histogram.density.assign(opts.histogram_bins, 0.0);
        const double width = (est.histogram.hi - est.histogram.lo) / opts.histogram_bins;
        for (double v : hnorm) {
            auto bin = static_cast<std::size_t>((v - est.histogram.lo) / width);
            bin = std::min(bin, opts.histogram_bins - 1);
            est.histogram.density[bin] += 1.0;
        }
        for (double& d : est.histogram.density) d /= static_cast<double>(K) * width;
    }
    return est;
}

DensityBound density_bound(const InvariantEstimate& invariant, const Vector& x, double t, double p,
                           const SdeProblem& problem) {
    if (!(p > 1.0)) throw std::invalid_argument("density_bound: need p > 1");
    if (invariant.samples.empty()) throw std::invalid_argument("density_bound: no invariant samples");
    const auto& space = problem.space();
    const double alpha = problem.alpha();
    const double C = harnack_constant(t, problem.sigma, alpha, problem.drift->delta(), problem.xi);
    const double kappa = harnack_distance_exponent(alpha, problem.sigma);
    std::vector<double> exponents;
    exponents.reserve(invariant.samples.size());
    for (const auto& y : invariant.samples)
        exponents.push_back(-p * C * std::pow(space.norm_h(x - y), kappa));
    const LogMeanExp lme = log_mean_exp(exponents);
    DensityBound out;
    out.value = std::exp(-(p - 1.0) / p * lme.log_mean);
    out.effective_samples = invariant.samples.size();
    out.sample_warning = out.effective_samples < 1000;
    return out;
}

UltraboundProfile ultrabound_profile(const SdeProblem& problem, const std::vector<double>& t_grid,
                                     double eps0, const UltraboundOptions& opts) {
    const double alpha = problem.alpha();
    if (!(alpha > 2.0)) throw std::invalid_argument("ultrabound_profile: need alpha > 2");
    if (!problem.noise) throw std::invalid_argument("ultrabound_profile: needs noise");
    if (t_grid.empty() || opts.x_norms.empty())
        throw std::invalid_argument("ultrabound_profile: empty time grid or start set");
    const auto& space = problem.space();

    UltraboundProfile prof;
    prof.t_grid = t_grid;
    prof.eps0 = eps0 > 0.0 ? eps0 : 0.5 * exp_moment_threshold(problem);
    prof.envelope_exponent = -alpha / (alpha - 2.0);
    const EnergyCoefficients ec = energy_coefficients(problem);
    prof.ode_c = ec.c;
    prof.ode_theta = ec.theta1 * kappa_alpha(problem);

    const Vector dir = space.eigenvectors().col(0);  // unit H-norm
    EnsembleSpec spec;
    spec.dt = opts.dt;
    spec.n_paths = opts.n_paths;
    spec.seed = opts.seed;
    spec.exec = opts.exec;
    spec.prox = opts.prox;
    const double e0 = prof.eps0;
    const Observable log_weight = [&space, e0, alpha](const Vector& v) {
        return e0 * std::pow(space.norm_h(v), alpha);
    };
    auto envelope = [&](double t) { return 1.0 + std::pow(t, prof.envelope_exponent); };

    prof.sup_log_moment.assign(t_grid.size(), -std::numeric_limits<double>::infinity());
    for (double r : opts.x_norms) {
        const Vector x0 = r * dir;
        const auto values = observe_paths(problem, x0, t_grid, log_weight, spec);
        std::vector<double> row(t_grid.size());
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            std::vector<double> col;
            col.reserve(values.size());
            for (const auto& path : values) col.push_back(path[j]);
            row[j] = log_mean_exp(col).log_mean;
            prof.sup_log_moment[j] = std::max(prof.sup_log_moment[j], row[j]);
        }
        prof.log_moment.push_back(std::move(row));

        const double T_end = t_grid.back();
        prof.ode_paths.push_back(
            solve_log_moment_ode(prof.ode_c, prof.ode_theta, prof.eps0, alpha, e0 * std::pow(r, alpha),
                                 T_end, opts.dt));
    }

    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        if (t_grid[j] <= 0.0) continue;
        prof.fitted_C = std::max(prof.fitted_C, prof.sup_log_moment[j] / envelope(t_grid[j]));
        if (t_grid[j] >= opts.independence_from) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto& row : prof.log_moment) {
                lo = std::min(lo, row[j]);
                hi = std::max(hi, row[j]);
            }
            prof.x_spread = std::max(prof.x_spread, hi - lo);
        }
    }

    std::size_t at_one = 0;
    for (std::size_t k = 0; k < prof.ode_paths.front().times.size(); ++k)
        if (prof.ode_paths.front().times[k] <= 1.0 + 1e-12) at_one = k;
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -g_lo;
    for (const auto& path : prof.ode_paths) {
        for (std::size_t k = 0; k < path.times.size(); ++k) {
            if (path.times[k] <= 0.0) continue;
            prof.ode_bound_c0 = std::max(prof.ode_bound_c0, path.values[k] / envelope(path.times[k]));
        }
        g_lo = std::min(g_lo, path.values[at_one]);
        g_hi = std::max(g_hi, path.values[at_one]);
    }
    prof.ode_merge_gap = std::expm1(g_hi - g_lo);
    return prof;
}

}  // namespace monospde
