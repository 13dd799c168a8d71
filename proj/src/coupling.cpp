#include "monospde/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monospde {

double coupling_epsilon(double alpha, double sigma) {
    if (!(sigma >= 2.0) || !(sigma > alpha - 2.0))
        throw std::invalid_argument("coupling: need sigma >= 2 and sigma > alpha - 2");
    return 1.0 - alpha / (sigma + 2.0);
}

double CouplingParams::quad_var_bound(double sigma) const {
    return std::pow(T, (sigma - 2.0) / sigma) *
           std::pow(std::pow(c_const, sigma) * std::pow(distance0, 2.0 * epsilon), 2.0 / sigma);
}

CouplingParams make_params(const SdeProblem& problem, const Vector& x, const Vector& y, double T,
                           double dt) {
    if (!(T > 0.0)) throw std::invalid_argument("make_params: need T > 0");
    const auto& space = problem.space();
    const double r0 = space.norm_h(x - y);
    if (r0 == 0.0) throw std::invalid_argument("make_params: need x != y");
    const std::size_t K = step_count(T, dt);
    if (K == 0) throw std::invalid_argument("make_params: horizon shorter than one step");

    const double sigma = problem.sigma;
    const double eps = coupling_epsilon(problem.alpha(), sigma);
    const double delta = problem.drift->delta();
    const double gamma = problem.drift->gamma();
    const double base = std::pow(eps * delta * problem.xi, 1.0 / sigma);

    CouplingParams p;
    p.epsilon = eps;
    p.T = T;
    p.dt = dt;
    p.distance0 = r0;
    p.couple_tol = 1e-9 * (1.0 + r0);

    auto trapz = [&](auto&& f) {
        double acc = 0.5 * (f(0.0) + f(T));
        for (std::size_t k = 1; k < K; ++k) acc += f(static_cast<double>(k) * dt);
        return acc * dt;
    };
    const double integral =
        trapz([&](double t) { return base * std::exp(-(0.5 + 1.0 / sigma) * eps * gamma * t); });
    p.c_const = 2.0 * std::pow(r0, eps) / (eps * integral);
    p.beta.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        p.beta[k] = p.c_const * base * std::exp(-(eps / sigma) * gamma * static_cast<double>(k) * dt);
    p.lemma_integral = trapz([&](double t) {
        const auto k = static_cast<std::size_t>(std::llround(t / dt));
        return p.beta[k] * std::exp(-0.5 * eps * gamma * t);
    });
    p.lemma_target = 2.0 * std::pow(r0, eps) / eps;
    return p;
}

CouplingRecord simulate_coupled(const SdeProblem& problem, const CouplingParams& params,
                                const Vector& x, const Vector& y, Rng& rng,
                                const CouplingOptions& opts) {
    if (!problem.noise) throw std::invalid_argument("simulate_coupled: the coupling needs noise");
    const auto& space = problem.space();
    const NoiseModel& noise = *problem.noise;
    const std::size_t K = params.beta.size() - 1;
    const double dt = params.dt;

    CouplingRecord rec;
    Vector a = x;
    Vector b = y;
    Stepper sx(problem, dt, opts.prox);
    Stepper sy(problem, dt, opts.prox);
    Vector kick(space.size());
    double r = space.norm_h(a - b);
    auto store = [&](double t) {
        if (!opts.store_paths) return;
        rec.times.push_back(t);
        rec.x_path.push_back(a);
        rec.y_path.push_back(b);
        rec.distance.push_back(r);
    };
    auto glue_if_close = [&](double t) {
        if (!rec.coupled && r <= params.couple_tol) {
            rec.coupled = true;
            rec.tau = t;
            b = a;
            r = 0.0;
        }
    };
    glue_if_close(0.0);
    store(0.0);

    for (std::size_t k = 0; k < K; ++k) {
        const double t_next = static_cast<double>(k + 1) * dt;
        if (rec.coupled) {
            sx.step(a, rng);
            b = a;
        } else {
            // Semi-implicit control: the singular factor uses the distance at t_k.
            // A gain of 1 moves Y onto X's right-hand side, so the step lands exactly on X.
            const double gain = std::min(1.0, dt * params.beta_at(k) / std::pow(r, params.epsilon));
            kick = gain * (a - b);
            sx.step(a, rng);
            const WienerIncrement& inc = sx.last_increment();
            const Vector zeta = noise.apply_b_inverse(kick) / dt;
            rec.stoch_int += zeta.dot(inc.dW_u);
            rec.quad_var += zeta.squaredNorm() * dt;
            ++rec.control_steps;
            if (gain == 1.0) {
                b = a;
            } else {
                sy.step(b, &inc.image_h, &kick);
            }
            const double r_next = space.norm_h(a - b);
            rec.max_distance_increase = std::max(rec.max_distance_increase, r_next - r);
            r = r_next;
            glue_if_close(t_next);
        }
        store(t_next);
    }
    rec.R = std::exp(-rec.stoch_int - 0.5 * rec.quad_var);
    rec.x_final = std::move(a);
    rec.y_final = std::move(b);
    return rec;
}

CouplingRecord simulate_coupled(const SdeProblem& problem, const Vector& x, const Vector& y,
                                double T, double dt, Rng& rng, const CouplingOptions& opts) {
    if (problem.space().norm_h(x - y) > 0.0)
        return simulate_coupled(problem, make_params(problem, x, y, T, dt), x, y, rng, opts);
    // Identical starts: coupled from time 0 and the density is 1.
    CouplingRecord rec;
    const std::size_t K = step_count(T, dt);
    Stepper sx(problem, dt, opts.prox);
    Vector a = x;
    if (opts.store_paths) {
        rec.times.push_back(0.0);
        rec.x_path.push_back(a);
        rec.y_path.push_back(a);
        rec.distance.push_back(0.0);
    }
    for (std::size_t k = 0; k < K; ++k) {
        sx.step(a, rng);
        if (opts.store_paths) {
            rec.times.push_back(static_cast<double>(k + 1) * dt);
            rec.x_path.push_back(a);
            rec.y_path.push_back(a);
            rec.distance.push_back(0.0);
        }
    }
    rec.tau = 0.0;
    rec.coupled = true;
    rec.x_final = a;
    rec.y_final = std::move(a);
    return rec;
}

std::vector<CouplingRecord> coupled_ensemble(const SdeProblem& problem, const CouplingParams& params,
                                             const Vector& x, const Vector& y,
                                             const EnsembleSpec& spec) {
    CouplingOptions opts;
    opts.prox = spec.prox;
    return map_paths<CouplingRecord>(spec.n_paths, spec.exec, [&](std::size_t i) {
        Rng rng = make_rng(spec.seed, Stream::Coupled, i);
        return simulate_coupled(problem, params, x, y, rng, opts);
    });
}

CoupledSummary summarize(const std::vector<CouplingRecord>& records, const CouplingParams& params,
                         double sigma) {
    CoupledSummary s;
    s.quad_var_bound = params.quad_var_bound(sigma);
    std::vector<double> rs;
    rs.reserve(records.size());
    std::size_t coupled = 0;
    for (const auto& rec : records) {
        rs.push_back(rec.R);
        if (rec.coupled) ++coupled;
        s.max_quad_var = std::max(s.max_quad_var, rec.quad_var);
        if (rec.quad_var > 1.05 * s.quad_var_bound) ++s.quad_var_violations;
    }
    s.R = mean_and_se(rs);
    s.coupled_fraction = records.empty() ? 0.0 : static_cast<double>(coupled) / records.size();
    return s;
}

WeightedLawReport verify_weighted_law(const SdeProblem& problem, const Vector& x, const Vector& y,
                                      double T, const Observable& F, const EnsembleSpec& spec) {
    std::vector<double> weighted;
    weighted.reserve(spec.n_paths);
    if (problem.space().norm_h(x - y) == 0.0) {
        EnsembleSpec coupled_spec = spec;
        coupled_spec.stream = Stream::Coupled;
        for (const auto& s : final_states(problem, x, T, coupled_spec)) weighted.push_back(F(s));
    } else {
        const CouplingParams params = make_params(problem, x, y, T, spec.dt);
        for (const auto& rec : coupled_ensemble(problem, params, x, y, spec))
            weighted.push_back(rec.R * F(rec.y_final));
    }
    EnsembleSpec direct_spec = spec;
    direct_spec.stream = Stream::PathsAlt;
    std::vector<double> direct;
    direct.reserve(spec.n_paths);
    for (const auto& s : final_states(problem, y, T, direct_spec)) direct.push_back(F(s));

    WeightedLawReport rep;
    rep.weighted = mean_and_se(weighted);
    rep.direct = mean_and_se(direct);
    const double se = std::hypot(rep.weighted.se, rep.direct.se);
    const double diff = std::abs(rep.weighted.mean - rep.direct.mean);
    rep.z_score = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rep.pass = rep.z_score <= 3.0;
    return rep;
}

double girsanov_moment_bound(const CouplingParams& params, double sigma, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("girsanov_moment: need p > 1");
    const double q = p / (p - 1.0);
    return std::exp(0.5 * q * (q - 1.0) * params.quad_var_bound(sigma));
}

GirsanovMomentReport girsanov_moment(const std::vector<CouplingRecord>& records,
                                     const CouplingParams& params, double sigma, double p) {
    GirsanovMomentReport rep;
    rep.p = p;
    rep.bound = girsanov_moment_bound(params, sigma, p);
    rep.exponent = p / (p - 1.0);
    std::vector<double> values;
    values.reserve(records.size());
    for (const auto& rec : records) values.push_back(std::pow(rec.R, rep.exponent));
    rep.empirical = mean_and_se(values);
    rep.pass = rep.empirical.mean <= rep.bound + 3.0 * rep.empirical.se;
    rep.heavy_tail_warning = rep.empirical.se > 0.5 * rep.empirical.mean;
    return rep;
}

}  // namespace monospde
