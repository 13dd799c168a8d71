#include "monospde/noise.hpp"
#include "monospde/space.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

using namespace monospde;

namespace {
Vector random_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}
}  // namespace

TEST_CASE("construction preconditions") {
    CHECK_THROWS_AS(DiscreteSpace(1), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteSpace(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteSpace(8, 0), std::invalid_argument);
    CHECK_NOTHROW(DiscreteSpace(5, 2));
    const DiscreteSpace s(15);
    CHECK(s.mesh() == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("difference stencil matches the composed dense operator") {
    std::mt19937_64 rng(3);
    for (int m = 1; m <= 3; ++m) {
        const DiscreteSpace s(12, m);
        const Matrix dm = oracle::difference_power(12, m, s.mesh());
        const Vector u = random_vector(12, rng);
        const Vector w = random_vector(12 + m, rng);
        CHECK((s.diff(u, m) - dm * u).norm() <= 1e-9 * (dm * u).norm());
        CHECK((s.diff_adjoint(w, m) - dm.transpose() * w).norm() <= 1e-9 * (dm.transpose() * w).norm());
    }
}

TEST_CASE("div is the negative adjoint of grad in the weighted inner product") {
    std::mt19937_64 rng(5);
    const DiscreteSpace s(20);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector u = random_vector(20, rng);
        const Vector w = random_vector(21, rng);
        const double lhs = s.mesh() * s.grad(u).dot(w);
        const double rhs = -s.inner(u, s.div(w));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("closed-form eigenpairs agree with a dense eigensolver") {
    const DiscreteSpace s(16);
    const Matrix d = oracle::forward_difference(16, s.mesh());
    const Matrix lap = d.transpose() * d;
    Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
    for (int k = 0; k < 16; ++k) CHECK(s.eigenvalue(k) == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-10));
    const double h = s.mesh();
    CHECK(s.eigenvalue(0) == doctest::Approx(4.0 / (h * h) * std::pow(std::sin(std::numbers::pi * h / 2), 2)));
    // Orthonormal in the H inner product and eigenvectors of -laplacian.
    const Matrix& E = s.eigenvectors();
    CHECK((h * E.transpose() * E - Matrix::Identity(16, 16)).norm() < 1e-10);
    for (int k = 0; k < 16; ++k) {
        const Vector r = -s.laplacian(E.col(k)) - s.eigenvalue(k) * E.col(k);
        CHECK(r.norm() < 1e-8 * s.eigenvalue(k));
    }
}

TEST_CASE("mode round trip and Parseval") {
    std::mt19937_64 rng(8);
    const DiscreteSpace s(10);
    const Vector u = random_vector(10, rng);
    CHECK((s.from_modes(s.to_modes(u)) - u).norm() < 1e-12);
    CHECK(s.to_modes(u).squaredNorm() == doctest::Approx(s.inner(u, u)).epsilon(1e-12));
}

TEST_CASE("norms") {
    const DiscreteSpace s(9);
    const Vector e1 = s.eigenvectors().col(0);
    CHECK(s.norm_h(e1) == doctest::Approx(1.0));
    CHECK(s.norm_v(e1, 2.0, 1) == doctest::Approx(std::sqrt(s.eigenvalue(0))));
    CHECK(s.norm_v(Vector::Zero(9), 4.0, 1) == 0.0);
    CHECK_THROWS(norm(s, NormKind::b(), e1));
}

TEST_CASE("embedding constants") {
    const auto s = build_space(16);
    CHECK(embedding_constant(*s, NormKind::h()) == 1.0);
    CHECK(embedding_constant(*s, NormKind::v(2.0, 1)) == doctest::Approx(s->eigenvalue(0)));
    std::mt19937_64 rng(11);
    for (int m : {1, 2}) {
        const auto sm = build_space(16, m);
        const double c0 = embedding_constant(*sm, NormKind::v(2.0, m));
        CHECK(c0 > 0.0);
        for (int trial = 0; trial < 200; ++trial) {
            const Vector u = random_vector(16, rng);
            CHECK(sm->power_sum_v(u, 2.0, m) >= c0 * sm->inner(u, u) * (1.0 - 1e-10));
        }
        for (double p : {2.0, 3.0, 4.0}) {
            const double kappa = power_embedding_constant(*sm, p, m);
            for (int trial = 0; trial < 200; ++trial) {
                const Vector u = random_vector(16, rng);
                CHECK(sm->power_sum_v(u, p, m) >= kappa * std::pow(sm->norm_h(u), p) * (1.0 - 1e-10));
            }
        }
    }
}

TEST_CASE("B norm with theta 1/2 equals the V(2,1) norm") {
    const auto s = build_space(12);
    const NoiseModel noise(s, 0.5, 1.0);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector u = random_vector(12, rng);
        CHECK(norm(*s, NormKind::b(), u, &noise) == doctest::Approx(s->norm_v(u, 2.0, 1)).epsilon(1e-10));
    }
}
