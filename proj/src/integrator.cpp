#include "monospde/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monospde {

namespace {

double objective(const DriftModel& model, const Vector& u, const Vector& rhs, double dt) {
    const auto& space = model.space();
    const Vector d = u - rhs;
    return 0.5 * space.inner(d, d) + dt * potential(model, u);
}

// H-gradient of the objective: u - rhs - dt A(u).
Vector residual_vector(const DriftModel& model, const Vector& u, const Vector& rhs, double dt) {
    return u - rhs + dt * model.negative_drift(u);
}

}  // namespace

Vector proximal_solve(const DriftModel& model, const Vector& rhs, double dt,
                      const ProxOptions& opts, ProxStats* stats, const Vector* guess) {
    if (!(dt > 0.0)) throw std::invalid_argument("proximal_solve: need dt > 0");
    if (dt * model.gamma() >= 1.0) throw std::invalid_argument("proximal_solve: need dt * gamma < 1");
    const auto& space = model.space();
    if (rhs.size() != space.size()) throw std::invalid_argument("proximal_solve: length mismatch");
    ProxStats local;
    ProxStats& st = stats ? *stats : local;
    st = ProxStats{};

    if (model.kind() == DriftKind::Linear) return rhs / (1.0 + dt * model.lambda());
    if (rhs.isZero(0.0)) return Vector::Zero(rhs.size());

    const double target = opts.tol * (1.0 + space.norm_h(rhs));
    Vector u = rhs;
    double psi = objective(model, u, rhs, dt);
    if (guess && guess->size() == rhs.size()) {
        const double psi_guess = objective(model, *guess, rhs, dt);
        if (psi_guess < psi) {
            u = *guess;
            psi = psi_guess;
        }
    }
    Vector g = residual_vector(model, u, rhs, dt);
    double res = space.norm_h(g);
    BandedSpd jac(space.size(), model.diff_order());

    for (int it = 0; it < opts.max_iter; ++it) {
        st.iterations = it;
        st.residual = res;
        if (res <= target) return u;

        Vector dir = g;
        bool newton = true;
        model.negative_jacobian(u, jac);
        for (int j = 0; j < space.size(); ++j) {
            for (int k = std::max(0, j - jac.bandwidth()); k <= j; ++k) jac.lower(j, k) *= dt;
            jac.lower(j, j) += 1.0;
        }
        if (jac.factorize()) {
            jac.solve_in_place(dir);
        } else {
            newton = false;
            st.used_fallback = true;
        }

        // Armijo on the objective; near the solution the objective is flat to
        // rounding, so a step that shrinks the residual is also accepted.
        const double slope = space.inner(g, dir);
        double s = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            const Vector trial = u - s * dir;
            const double psi_t = objective(model, trial, rhs, dt);
            const Vector g_t = residual_vector(model, trial, rhs, dt);
            const double res_t = space.norm_h(g_t);
            if (psi_t <= psi - 1e-4 * s * slope || (newton && s == 1.0 && res_t < 0.5 * res)) {
                u = trial;
                g = g_t;
                res = res_t;
                psi = psi_t;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            if (!newton) break;
            // Steepest descent with its own line search.
            st.used_fallback = true;
            double s_sd = 1.0;
            for (int ls = 0; ls < 60; ++ls) {
                const Vector trial = u - s_sd * g;
                const double psi_t = objective(model, trial, rhs, dt);
                if (psi_t < psi - 1e-4 * s_sd * space.inner(g, g)) {
                    u = trial;
                    g = residual_vector(model, u, rhs, dt);
                    res = space.norm_h(g);
                    psi = psi_t;
                    accepted = true;
                    break;
                }
                s_sd *= 0.5;
            }
            if (!accepted) break;
        }
    }
    st.residual = res;
    if (res <= target) return u;
    throw SolverError("proximal_solve: no convergence, residual " + std::to_string(res), res);
}

SdeProblem SdeProblem::make(std::shared_ptr<const DriftModel> drift, NoiseModel noise,
                            double sigma) {
    if (!drift) throw std::invalid_argument("SdeProblem: null drift");
    const double alpha = drift->alpha();
    if (!(sigma >= 2.0) || !(sigma > alpha - 2.0))
        throw std::invalid_argument("SdeProblem: need sigma >= 2 and sigma > alpha - 2");
    if (noise.space().size() != drift->space().size())
        throw std::invalid_argument("SdeProblem: noise and drift live on different grids");
    SdeProblem p;
    const CertifiedXi xi = certified_xi(noise, *drift, sigma);
    if (!(xi.value > 0.0)) throw std::invalid_argument("SdeProblem: (c2) constant is not positive");
    p.xi = xi.value;
    p.xi_closed_form = xi.closed_form;
    const int m = drift->diff_order();
    p.c0 = m == 0 ? 1.0 : embedding_constant(drift->space(), NormKind::v(2.0, m));
    p.sigma = sigma;
    p.drift = std::move(drift);
    p.noise = std::move(noise);
    return p;
}

SdeProblem SdeProblem::without_noise() const {
    SdeProblem p = *this;
    p.noise.reset();
    return p;
}

EnergyCoefficients energy_coefficients(const SdeProblem& problem) {
    const double gamma_plus = std::max(0.0, problem.drift->gamma());
    return {problem.hs_norm_sq(), problem.drift->delta() - gamma_plus / problem.c0};
}

Stepper::Stepper(const SdeProblem& problem, double dt, ProxOptions opts)
    : problem_(&problem), dt_(dt), opts_(opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("Stepper: need dt > 0");
    if (dt * problem.drift->gamma() >= 1.0) throw std::invalid_argument("Stepper: need dt * gamma < 1");
    rhs_.resize(problem.space().size());
}

void Stepper::step(Vector& x, const Vector* noise_image, const Vector* extra) {
    rhs_ = x;
    if (noise_image) rhs_ += *noise_image;
    if (extra) rhs_ += *extra;
    // The current state is a better starting point than rhs for the stiff modes.
    x = proximal_solve(*problem_->drift, rhs_, dt_, opts_, &stats_, &x);
}

void Stepper::step(Vector& x, Rng& rng) {
    if (!problem_->noise) {
        step(x, nullptr);
        return;
    }
    sample_increment_into(*problem_->noise, dt_, rng, inc_);
    step(x, &inc_.image_h);
}

std::size_t step_count(double T, double dt) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("step_count: need dt > 0, T >= 0");
    const double k = std::round(T / dt);
    if (std::abs(k * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("step_count: dt does not divide T");
    return static_cast<std::size_t>(k);
}

namespace {

Trajectory run(const SdeProblem& problem, const Vector& x0, double T, double dt, Rng* rng,
               const ProxOptions& opts) {
    const auto& space = problem.space();
    if (x0.size() != space.size()) throw std::invalid_argument("simulate: x0 length mismatch");
    const std::size_t K = step_count(T, dt);
    const auto& drift = *problem.drift;
    const NormKind vn = drift.coercivity_norm();
    const double delta = drift.delta();
    const double gamma = drift.gamma();

    Trajectory tr;
    tr.times.reserve(K + 1);
    tr.states.reserve(K + 1);
    auto record = [&](double t, const Vector& x) {
        tr.times.push_back(t);
        tr.states.push_back(x);
        tr.norm_h.push_back(space.norm_h(x));
        tr.norm_v.push_back(norm(space, vn, x));
    };
    Vector x = x0;
    record(0.0, x);
    Stepper stepper(problem, dt, opts);
    for (std::size_t k = 0; k < K; ++k) {
        const double before = space.inner(x, x);
        double noise_terms = 0.0;
        try {
            if (rng && problem.noise) {
                stepper.step(x, *rng);
                const Vector& img = stepper.last_increment().image_h;
                noise_terms = 2.0 * space.inner(tr.states.back(), img) + space.inner(img, img);
            } else {
                stepper.step(x, nullptr);
            }
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " at step " + std::to_string(k), e.residual(),
                              static_cast<long>(k));
        }
        const double after = space.inner(x, x);
        const double bound = before + dt * (gamma * after - delta * drift.n_functional(x)) + noise_terms;
        const double excess = after - bound;
        ++tr.ledger.steps;
        tr.ledger.max_excess = k == 0 ? excess : std::max(tr.ledger.max_excess, excess);
        if (excess > 1e-9 * (1.0 + before + after)) ++tr.ledger.violations;
        record(static_cast<double>(k + 1) * dt, x);
    }
    return tr;
}

}  // namespace

Trajectory simulate(const SdeProblem& problem, const Vector& x0, double T, double dt, Rng& rng,
                    const ProxOptions& opts) {
    return run(problem, x0, T, dt, &rng, opts);
}

Trajectory deterministic_flow(const SdeProblem& problem, const Vector& x0, double T, double dt,
                              const ProxOptions& opts) {
    const SdeProblem quiet = problem.without_noise();
    return run(quiet, x0, T, dt, nullptr, opts);
}

}  // namespace monospde
