#include "monospde/noise.hpp"

#include "monospde/drift.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace monospde {

NoiseModel::NoiseModel(SpacePtr space, double theta, double scale)
    : space_(std::move(space)), theta_(theta), scale_(scale) {
    if (!space_) throw std::invalid_argument("NoiseModel: null space");
    if (!(theta >= 0.0)) throw std::invalid_argument("NoiseModel: need theta >= 0");
    if (!(scale > 0.0)) throw std::invalid_argument("NoiseModel: need scale > 0");
    const Vector& lam = space_->eigenvalues();
    const int n = space_->size();
    b_.resize(n);
    c2_lower_ = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        b_(k) = theta == 0.0 ? scale : scale * std::pow(lam(k), -theta);
        if (!(b_(k) > 0.0) || !std::isfinite(b_(k)))
            throw std::invalid_argument("NoiseModel: degenerate coefficient");
        hs_norm_sq_ += b_(k) * b_(k);
        op_norm_sq_ = std::max(op_norm_sq_, b_(k) * b_(k));
        c2_lower_ = std::min(c2_lower_, b_(k) * std::sqrt(lam(k)));
    }
}

Vector NoiseModel::apply_b(const Vector& u_coords) const {
    if (u_coords.size() != b_.size()) throw std::invalid_argument("apply_b: length mismatch");
    return space_->from_modes(u_coords.cwiseProduct(b_));
}

Vector NoiseModel::apply_b_inverse(const Vector& u) const {
    if (u.size() != b_.size()) throw std::invalid_argument("apply_b_inverse: length mismatch");
    return space_->to_modes(u).cwiseQuotient(b_);
}

NoiseModel build_noise(SpacePtr space, double theta, double scale) {
    return NoiseModel(std::move(space), theta, scale);
}

void sample_increment_into(const NoiseModel& model, double dt, Rng& rng, WienerIncrement& out) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: need dt > 0");
    const int n = model.space().size();
    const double sd = std::sqrt(dt);
    std::normal_distribution<double> normal;
    out.dW_u.resize(n);
    for (int k = 0; k < n; ++k) out.dW_u(k) = sd * normal(rng);
    out.dt = dt;
    out.image_h = model.apply_b(out.dW_u);
}

WienerIncrement sample_increment(const NoiseModel& model, double dt, Rng& rng) {
    WienerIncrement w;
    sample_increment_into(model, dt, rng, w);
    return w;
}

namespace {

void check_sigma(double sigma, double alpha) {
    if (!(sigma >= 2.0) || !(sigma > alpha - 2.0))
        throw std::invalid_argument("xi: need sigma >= 2 and sigma > alpha - 2");
}

double xi_ratio(const NoiseModel& noise, const DriftModel& drift, double sigma, const Vector& u) {
    const double alpha = drift.alpha();
    const double nu = drift.n_functional(u);
    const double bn = noise.b_norm(u);
    const double hn = drift.space().norm_h(u);
    return nu / (std::pow(bn, sigma) * std::pow(hn, alpha - sigma));
}

}  // namespace

double xi_constant(const NoiseModel& noise, const DriftModel& drift, double sigma,
                   long sample_count, std::uint64_t seed) {
    check_sigma(sigma, drift.alpha());
    if (sample_count < 1) throw std::invalid_argument("xi_constant: need sample_count >= 1");
    const auto& space = drift.space();
    const int n = space.size();
    Rng rng{seed};
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> decay(0.0, 3.0);
    double best = std::numeric_limits<double>::infinity();
    for (long s = 0; s < sample_count; ++s) {
        Vector coords = Vector::Zero(n);
        if (s < n) {
            coords(s) = 1.0;
        } else {
            const double a = decay(rng);
            for (int k = 0; k < n; ++k) coords(k) = normal(rng) * std::pow(k + 1.0, -a);
        }
        const Vector u = space.from_modes(coords);
        best = std::min(best, xi_ratio(noise, drift, sigma, u));
    }
    return best;
}

CertifiedXi certified_xi(const NoiseModel& noise, const DriftModel& drift, double sigma,
                         std::uint64_t seed) {
    const double alpha = drift.alpha();
    check_sigma(sigma, alpha);
    if (alpha != sigma) return {0.9 * xi_constant(noise, drift, sigma, 20000, seed), false};

    const auto& space = drift.space();
    const int n = space.size();
    const int m = drift.diff_order();
    const double h = space.mesh();
    const Matrix& E = space.eigenvectors();
    // G_kl = <D^m e_k, D^m e_l>_h, scaled by b on both sides.
    Matrix g(n, n);
    if (m == 0) {
        g.setIdentity();
    } else {
        Matrix de(n + m, n);
        for (int k = 0; k < n; ++k) de.col(k) = space.diff(E.col(k), m);
        g = h * de.transpose() * de;
    }
    const Vector& b = noise.coefficients();
    const Matrix scaled = b.asDiagonal() * g * b.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(scaled, Eigen::EigenvaluesOnly);
    const double xi2 = es.eigenvalues()(0);
    const double entries = m == 0 ? static_cast<double>(n) : static_cast<double>(n + m);
    const double lift = alpha == 2.0 ? 1.0 : std::pow(h * entries, -(alpha - 2.0) / 2.0);
    return {lift * std::pow(xi2, alpha / 2.0), true};
}

}  // namespace monospde
