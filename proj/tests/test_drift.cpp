#include "monospde/drift.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace monospde;

namespace {

Vector random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

std::vector<DriftModel> all_kinds(const SpacePtr& s1, const SpacePtr& s2) {
    return {DriftModel::reaction_diffusion(s1, 4.0, 1.0), DriftModel::p_laplace(s1, 4.0, 2.0, 0.0),
            DriftModel::p_laplace(s1, 3.0, 2.5, 0.7),     DriftModel::high_order(s2, 2, 4.0, 3.0, 0.5),
            DriftModel::linear(s1, 1.5)};
}

}  // namespace

TEST_CASE("signed_power") {
    CHECK(signed_power(-2.0, 2.0) == doctest::Approx(-8.0));
    CHECK(signed_power(3.0, 0.0) == 3.0);
    CHECK(signed_power(-1.5, 1.0) == doctest::Approx(-2.25));
    CHECK(signed_power(-2.0, 0.5) == doctest::Approx(-std::pow(2.0, 1.5)));
    CHECK(signed_power(0.0, 0.5) == 0.0);
}

TEST_CASE("edgewise inequality is tight at antipodal scalars") {
    Vector a(1);
    Vector b(1);
    a << 1.0;
    b << -1.0;
    CHECK(lemma31_gap(a, b, 2.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(lemma31_gap(a, b, 0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS(lemma31_gap(a, Vector(2), 1.0));
}

TEST_CASE("edgewise inequality on random pairs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(0.0, 6.0);
    std::uniform_int_distribution<int> dim(1, 16);
    for (int trial = 0; trial < 5000; ++trial) {
        const int d = dim(rng);
        const double r = ur(rng);
        const Vector a = random_vector(d, rng);
        const Vector b = random_vector(d, rng);
        const double scale = std::pow(std::max(a.norm(), b.norm()), r + 2.0);
        CHECK(lemma31_gap(a, b, r) >= -1e-12 * (1.0 + scale));
    }
}

TEST_CASE("factory preconditions") {
    const auto s = build_space(8);
    CHECK_THROWS(DriftModel::reaction_diffusion(s, 1.5, 1.0));
    CHECK_THROWS(DriftModel::reaction_diffusion(s, 4.0, -1.0));
    CHECK_THROWS(DriftModel::p_laplace(s, 4.0, 1.5, 1.0));
    CHECK_THROWS(DriftModel::p_laplace(s, 3.0, 4.0, 1.0));
    CHECK_THROWS(DriftModel::high_order(s, 4, 4.0, 2.0, 0.0));
    CHECK_THROWS(DriftModel::linear(s, 0.0));
}

TEST_CASE("declared constants") {
    const auto s = build_space(8);
    const auto rd = DriftModel::reaction_diffusion(s, 4.0, 1.0);
    CHECK(rd.alpha() == 2.0);
    CHECK(rd.delta() == 2.0);
    CHECK(rd.coercivity_norm().tag == NormKind::Tag::V);
    const auto pl = DriftModel::p_laplace(s, 4.0, 2.0, 0.0);
    CHECK(pl.alpha() == 4.0);
    CHECK(pl.delta() == doctest::Approx(0.5));
    const auto lin = DriftModel::linear(s, 3.0);
    CHECK(lin.delta() == 6.0);
    CHECK(lin.diff_order() == 0);
}

TEST_CASE("reaction-diffusion drift is the discrete Laplacian minus the reaction") {
    std::mt19937_64 rng(4);
    const auto s = build_space(10);
    const auto rd = DriftModel::reaction_diffusion(s, 4.0, 2.0);
    const Vector u = random_vector(10, rng);
    Vector expected = s->laplacian(u);
    for (int j = 0; j < 10; ++j) expected(j) -= 2.0 * u(j) * u(j) * u(j);
    CHECK((apply_drift(rd, u) - expected).norm() < 1e-10 * expected.norm());
}

TEST_CASE("A(0) = 0 and the drift is minus the H-gradient of the potential") {
    std::mt19937_64 rng(9);
    const auto s1 = build_space(9);
    const auto s2 = build_space(9, 2);
    for (const auto& model : all_kinds(s1, s2)) {
        CAPTURE(to_string(model.kind()));
        CHECK(apply_drift(model, Vector::Zero(9)).norm() == 0.0);
        const Vector u = random_vector(9, rng);
        const Vector g = model.negative_drift(u);
        const double h = model.space().mesh();
        const auto phi = [&](const Vector& v) { return potential(model, v); };
        for (int j = 0; j < 9; ++j) {
            const double fd = oracle::partial_fd(phi, u, j, 1e-5) / h;
            CHECK(g(j) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("banded Jacobian matches finite differences of the drift") {
    std::mt19937_64 rng(12);
    const auto s1 = build_space(9);
    const auto s2 = build_space(9, 2);
    for (const auto& model : all_kinds(s1, s2)) {
        CAPTURE(to_string(model.kind()));
        const Vector u = random_vector(9, rng);
        BandedSpd jac;
        model.negative_jacobian(u, jac);
        const Matrix dense = jac.to_dense();
        for (int k = 0; k < 9; ++k) {
            Vector a = u;
            Vector b = u;
            a(k) += 1e-6;
            b(k) -= 1e-6;
            const Vector col = (model.negative_drift(a) - model.negative_drift(b)) / 2e-6;
            CHECK((col - dense.col(k)).norm() <= 1e-5 * (1.0 + col.norm()));
        }
    }
}

TEST_CASE("sampled monotonicity has no violations") {
    const auto s1 = build_space(16);
    const auto s2 = build_space(16, 2);
    for (const auto& model : all_kinds(s1, s2)) {
        CAPTURE(to_string(model.kind()));
        const auto rep = check_monotonicity(model, 3000, 21);
        CHECK(rep.violations == 0);
        CHECK(rep.delta_hat >= model.delta() * (1.0 - 1e-9));
        // Antipodal pairs at large scale make the margin pure rounding.
        CHECK(rep.gamma_hat <= 1e-3);
        CHECK(rep.coercivity_margin >= -1e-9);
        CHECK(rep.samples == 3000);
    }
}

TEST_CASE("linear drift has K_hat = -2 lambda") {
    const auto s = build_space(6);
    const auto rep = check_monotonicity(DriftModel::linear(s, 2.0), 300, 1);
    CHECK(rep.K_hat == doctest::Approx(-4.0));
    CHECK(rep.delta_hat == doctest::Approx(4.0));
}
