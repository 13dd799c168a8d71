#include "monospde/analysis.hpp"
#include "monospde/ensemble.hpp"
#include "monospde/integrator.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace monospde;

namespace {

std::shared_ptr<const DriftModel> share(DriftModel m) {
    return std::make_shared<const DriftModel>(std::move(m));
}

Vector random_vector(int n, Rng& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

}  // namespace

TEST_CASE("linear resolvent closed form") {
    const auto s = build_space(5);
    const auto lin = DriftModel::linear(s, 1.0);
    const Vector e1 = s->eigenvectors().col(0);
    const Vector u = proximal_solve(lin, 1.1 * e1, 0.1);
    CHECK((u - e1).norm() < 1e-12);
}

TEST_CASE("zero right-hand side maps to zero") {
    const auto s = build_space(9);
    const auto s2 = build_space(9, 2);
    for (const auto& m : {DriftModel::reaction_diffusion(s, 4, 1), DriftModel::p_laplace(s, 4, 2, 0),
                          DriftModel::high_order(s2, 2, 4, 2, 1), DriftModel::linear(s, 2)}) {
        CHECK(proximal_solve(m, Vector::Zero(9), 0.01).norm() == 0.0);
    }
}

TEST_CASE("proximal solve agrees with the coordinate-bisection oracle") {
    Rng rng(31);
    const auto s = build_space(8);
    const auto s2 = build_space(8, 2);
    for (const auto& model : {DriftModel::p_laplace(s, 4, 2, 0), DriftModel::p_laplace(s, 3, 2.5, 1),
                              DriftModel::reaction_diffusion(s, 4, 1), DriftModel::high_order(s2, 2, 4, 3, 0.5)}) {
        CAPTURE(to_string(model.kind()));
        for (double scale : {0.1, 3.0}) {
            const Vector rhs = random_vector(8, rng, scale);
            const double dt = 1e-3;
            ProxStats st;
            const Vector u = proximal_solve(model, rhs, dt, {}, &st);
            const double tol = 1e-10 * (1.0 + s->norm_h(rhs));
            CHECK(st.residual <= tol);
            CHECK(s->norm_h(u - rhs + dt * model.negative_drift(u)) <= tol);
            // Objective decreased from the starting point.
            CHECK(0.5 * s->inner(u - rhs, u - rhs) + dt * potential(model, u) <= dt * potential(model, rhs));

            const auto partial = [&](const Vector& v, int j) {
                return (v(j) - rhs(j)) + dt * model.negative_drift(v)(j);
            };
            Vector ref = rhs;
            for (int round = 0; round < 100; ++round) {
                ref = oracle::coordinate_bisection(partial, ref, 200, 1.0 + scale);
                if (s->norm_h(ref - rhs + dt * model.negative_drift(ref)) <= 1e-12 * (1.0 + s->norm_h(rhs)))
                    break;
            }
            CHECK(s->norm_h(u - ref) <= 1e-7 * (1.0 + s->norm_h(rhs)));
        }
    }
}

TEST_CASE("solver failure carries the residual") {
    const auto s = build_space(8);
    const auto pl = DriftModel::p_laplace(s, 4, 2, 0);
    Rng rng(2);
    const Vector rhs = random_vector(8, rng, 50.0);
    ProxOptions opts;
    opts.max_iter = 1;
    opts.tol = 1e-15;
    try {
        proximal_solve(pl, rhs, 1e-2, opts);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("step_count") {
    CHECK(step_count(1.0, 1e-3) == 1000);
    CHECK(step_count(0.0, 0.1) == 0);
    CHECK_THROWS(step_count(1.0, 0.3));
    CHECK_THROWS(step_count(1.0, 0.0));
}

TEST_CASE("problem validation") {
    const auto s = build_space(8);
    const auto pl = share(DriftModel::p_laplace(s, 4, 2, 0));
    CHECK_THROWS(SdeProblem::make(pl, build_noise(s, 0.5, 1.0), 1.5));
    CHECK_THROWS(SdeProblem::make(pl, build_noise(s, 0.5, 1.0), 2.0 - 1e-9));
    const auto p = SdeProblem::make(pl, build_noise(s, 0.5, 1.0), 4.0);
    CHECK(p.xi > 0.0);
    CHECK(p.c0 == doctest::Approx(s->eigenvalue(0)));
    CHECK_FALSE(p.without_noise().noise.has_value());
}

TEST_CASE("noise-free linear flow decays exponentially") {
    const auto s = build_space(6);
    const auto p = SdeProblem::make(share(DriftModel::linear(s, 1.0)), build_noise(s, 0.0, 1.0), 2.0);
    const Vector e1 = s->eigenvectors().col(0);
    const Trajectory tr = deterministic_flow(p, e1, 1.0, 1e-3);
    CHECK(tr.times.size() == 1001);
    CHECK(s->norm_h(tr.states.back() - std::exp(-1.0) * e1) <= 5e-4);
    const Trajectory zero = deterministic_flow(p, Vector::Zero(6), 1.0, 1e-2);
    CHECK(zero.states.back().norm() == 0.0);
}

TEST_CASE("zero stays zero without noise for every drift") {
    const auto s = build_space(8);
    const auto pl = share(DriftModel::p_laplace(s, 4, 2, 1));
    const auto p = SdeProblem::make(pl, build_noise(s, 0.5, 1.0), 4.0);
    const Trajectory tr = deterministic_flow(p, Vector::Zero(8), 0.5, 1e-2);
    for (const auto& x : tr.states) CHECK(x.norm() == 0.0);
}

TEST_CASE("p-Laplace flows forget their initial data") {
    const auto s = build_space(16);
    const auto pl = share(DriftModel::p_laplace(s, 4, 2, 0));
    const auto p = SdeProblem::make(pl, build_noise(s, 0.5, 1.0), 4.0);
    Rng rng(8);
    Vector a = random_vector(16, rng, 1.0);
    Vector b = random_vector(16, rng, 1.0);
    a *= 10.0 / s->norm_h(a);
    b *= 1000.0 / s->norm_h(b);
    const Vector xa = deterministic_flow(p, a, 1.0, 1e-3).states.back();
    const Vector xb = deterministic_flow(p, b, 1.0, 1e-3).states.back();
    // |X_t|^2 <= h(t) with h' = -delta kappa h^{alpha/2} from any start.
    const double kappa = power_embedding_constant(*s, 4.0, 1);
    const double env = comparison_envelope(pl->delta() * kappa, 4.0, 1.0);
    CHECK(s->inner(xa, xa) <= env);
    CHECK(s->inner(xb, xb) <= env);
    CHECK(s->norm_h(xa - xb) <= 2.0 * std::sqrt(env));
}

TEST_CASE("heat-equation modes have the exact OU variance") {
    // c = 0 leaves the discrete Laplacian: mode k is an OU process with rate lambda_k.
    const auto s = build_space(8);
    const auto heat = share(DriftModel::reaction_diffusion(s, 4, 0.0));
    const auto p = SdeProblem::make(heat, build_noise(s, 0.5, 1.0), 2.0);
    EnsembleSpec spec;
    spec.dt = 1e-3;
    spec.n_paths = 4000;
    spec.seed = 5;
    const double T = 0.3;
    const auto finals = final_states(p, Vector::Zero(8), T, spec);
    for (int k = 0; k < 2; ++k) {
        std::vector<double> sq;
        for (const auto& x : finals) sq.push_back(std::pow(s->to_modes(x)(k), 2));
        const Estimate e = mean_and_se(sq);
        const double lam = s->eigenvalue(k);
        const double b = p.noise->coefficients()(k);
        const double exact = b * b * -std::expm1(-2.0 * lam * T) / (2.0 * lam);
        CAPTURE(k);
        CHECK(std::abs(e.mean - exact) <= 3.0 * e.se);
    }
}

TEST_CASE("energy ledger holds at dt = 1e-3 for every example drift") {
    const auto s = build_space(16);
    const auto s2 = build_space(16, 2);
    const std::vector<SdeProblem> problems{
        SdeProblem::make(share(DriftModel::reaction_diffusion(s, 4, 1)), build_noise(s, 0.5, 1.0), 2.0),
        SdeProblem::make(share(DriftModel::p_laplace(s, 4, 2, 0)), build_noise(s, 0.5, 1.0), 4.0),
        SdeProblem::make(share(DriftModel::high_order(s2, 2, 4, 2, 0)), build_noise(s2, 0.5, 1.0), 4.0),
        SdeProblem::make(share(DriftModel::linear(s, 1)), build_noise(s, 0.0, 1.0), 2.0)};
    for (const auto& p : problems) {
        Rng rng(3);
        const Trajectory tr = simulate(p, 2.0 * s->eigenvectors().col(1), 0.5, 1e-3, rng);
        CHECK(tr.ledger.steps == 500);
        CHECK(tr.ledger.violations == 0);
        CHECK(tr.norm_h.size() == tr.times.size());
    }
}

TEST_CASE("same-noise trajectories never separate and contract at the predicted rate") {
    const auto s = build_space(16);
    const auto rd = share(DriftModel::reaction_diffusion(s, 4, 1));
    const auto p = SdeProblem::make(rd, build_noise(s, 0.5, 1.0), 2.0);
    Rng ra(4);
    Rng rb(4);
    Stepper sa(p, 1e-3);
    Stepper sb(p, 1e-3);
    Vector a = s->eigenvectors().col(0);
    Vector b = -a + 0.5 * s->eigenvectors().col(3);
    const double d0 = s->inner(a - b, a - b);
    double prev = std::sqrt(d0);
    const double rate = p.c0 * rd->delta();
    for (int k = 1; k <= 300; ++k) {
        sa.step(a, ra);
        sb.step(b, &sa.last_increment().image_h);
        const double d = s->norm_h(a - b);
        CHECK(d <= prev * (1.0 + 1e-12));
        CHECK(d * d <= std::exp(-rate * k * 1e-3) * d0 * (1.0 + 1e-2));
        prev = d;
    }
}

TEST_CASE("mean-square bound after the transient") {
    const auto s = build_space(16);
    const auto pl = share(DriftModel::p_laplace(s, 4, 2, 0));
    const auto p = SdeProblem::make(pl, build_noise(s, 0.5, 1.0), 4.0);
    EnsembleSpec spec;
    spec.dt = 1e-3;
    spec.n_paths = 100;
    spec.seed = 9;
    const Vector x0 = 100.0 * s->eigenvectors().col(0);
    const Observable sq = [&](const Vector& v) { return s->inner(v, v); };
    const std::vector<double> times{1.0, 1.5, 2.0};
    const auto values = observe_paths(p, x0, times, sq, spec);
    const double kappa = power_embedding_constant(*s, 4.0, 1);
    const double a = pl->delta() * kappa;
    const double equilibrium = std::sqrt(p.hs_norm_sq() / a);
    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<double> col;
        for (const auto& v : values) col.push_back(v[j]);
        const Estimate e = mean_and_se(col);
        CHECK(e.mean <= 2.0 * (equilibrium + comparison_envelope(a, 4.0, times[j])));
    }
}
