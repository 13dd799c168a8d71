#include "monospde/space.hpp"

#include "monospde/noise.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace monospde {

namespace {

// Signed binomial stencil of the m-fold forward difference: (-1)^l C(m, l).
std::vector<double> difference_stencil(int m) {
    std::vector<double> s(static_cast<std::size_t>(m) + 1);
    double binom = 1.0;
    for (int l = 0; l <= m; ++l) {
        s[static_cast<std::size_t>(l)] = (l % 2 == 0 ? 1.0 : -1.0) * binom;
        binom = binom * (m - l) / (l + 1);
    }
    return s;
}

}  // namespace

DiscreteSpace::DiscreteSpace(int n, int order) : n_(n), order_(order) {
    if (n < 2) throw std::invalid_argument("DiscreteSpace: need n >= 2, got " + std::to_string(n));
    if (order < 1) throw std::invalid_argument("DiscreteSpace: derivative order must be >= 1");
    if (2 * order + 1 > n)
        throw std::invalid_argument("DiscreteSpace: stencil of order " + std::to_string(order) +
                                    " does not fit on " + std::to_string(n) + " nodes");
    h_ = 1.0 / (n + 1);
    eigenvalues_.resize(n);
    eigenvectors_.resize(n, n);
    const double pi = std::numbers::pi;
    for (int k = 1; k <= n; ++k) {
        const double s = std::sin(k * pi * h_ / 2.0);
        eigenvalues_(k - 1) = 4.0 / (h_ * h_) * s * s;
        for (int j = 0; j < n; ++j)
            eigenvectors_(j, k - 1) = std::sqrt(2.0) * std::sin((j + 1) * k * pi / (n + 1));
    }
}

Vector DiscreteSpace::diff(const Vector& u, int m) const {
    if (u.size() != n_) throw std::invalid_argument("diff: length mismatch");
    const auto s = difference_stencil(m);
    const double scale = std::pow(h_, -m);
    Vector w(n_ + m);
    for (int i = 0; i < n_ + m; ++i) {
        double acc = 0.0;
        for (int l = 0; l <= m; ++l) {
            const int j = i - l;
            if (j >= 0 && j < n_) acc += s[static_cast<std::size_t>(l)] * u(j);
        }
        w(i) = scale * acc;
    }
    return w;
}

Vector DiscreteSpace::diff_adjoint(const Vector& w, int m) const {
    if (w.size() != n_ + m) throw std::invalid_argument("diff_adjoint: length mismatch");
    const auto s = difference_stencil(m);
    const double scale = std::pow(h_, -m);
    Vector u(n_);
    for (int j = 0; j < n_; ++j) {
        double acc = 0.0;
        for (int l = 0; l <= m; ++l) acc += s[static_cast<std::size_t>(l)] * w(j + l);
        u(j) = scale * acc;
    }
    return u;
}

Vector DiscreteSpace::to_modes(const Vector& u) const { return h_ * (eigenvectors_.transpose() * u); }

Vector DiscreteSpace::from_modes(const Vector& coords) const { return eigenvectors_ * coords; }

double DiscreteSpace::norm_h(const Vector& u) const { return std::sqrt(h_ * u.squaredNorm()); }

double DiscreteSpace::power_sum_v(const Vector& u, double p, int m) const {
    const Vector w = diff(u, m);
    if (p == 2.0) return h_ * w.squaredNorm();
    double acc = 0.0;
    for (int i = 0; i < w.size(); ++i) acc += std::pow(std::abs(w(i)), p);
    return h_ * acc;
}

double DiscreteSpace::norm_v(const Vector& u, double p, int m) const {
    return std::pow(power_sum_v(u, p, m), 1.0 / p);
}

Matrix DiscreteSpace::gram(int m) const {
    Matrix d(n_ + m, n_);
    Vector unit = Vector::Zero(n_);
    for (int j = 0; j < n_; ++j) {
        unit(j) = 1.0;
        d.col(j) = diff(unit, m);
        unit(j) = 0.0;
    }
    return d.transpose() * d;
}

SpacePtr build_space(int n, int m) { return std::make_shared<const DiscreteSpace>(n, m); }

double norm(const DiscreteSpace& space, NormKind kind, const Vector& u, const NoiseModel* noise) {
    switch (kind.tag) {
        case NormKind::Tag::H:
            return space.norm_h(u);
        case NormKind::Tag::V:
            return space.norm_v(u, kind.p, kind.m);
        case NormKind::Tag::B:
            if (noise == nullptr) throw std::invalid_argument("norm: B norm needs a noise model");
            return noise->b_norm(u);
    }
    throw std::invalid_argument("norm: unknown kind");
}

double embedding_constant(const DiscreteSpace& space, NormKind kind) {
    if (kind.tag == NormKind::Tag::H) return 1.0;
    if (kind.tag != NormKind::Tag::V || kind.p != 2.0)
        throw std::invalid_argument("embedding_constant: defined for V(2, m) and H");
    if (kind.m == 1) return space.eigenvalue(0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(space.gram(kind.m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double power_embedding_constant(const DiscreteSpace& space, double p, int m) {
    if (p < 2.0) throw std::invalid_argument("power_embedding_constant: need p >= 2");
    const double c0 = embedding_constant(space, NormKind::v(2.0, m));
    const double measure = space.mesh() * (space.size() + m);
    return std::pow(measure, -(p - 2.0) / 2.0) * std::pow(c0, p / 2.0);
}

}  // namespace monospde
