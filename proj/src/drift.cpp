#include "monospde/drift.hpp"

#include "monospde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace monospde {

std::string to_string(DriftKind kind) {
    switch (kind) {
        case DriftKind::ReactionDiffusion: return "reaction-diffusion";
        case DriftKind::PLaplace: return "p-laplace";
        case DriftKind::HighOrder: return "high-order";
        case DriftKind::Linear: return "linear";
    }
    return "unknown";
}

double signed_power(double x, double r) noexcept {
    if (r == 0.0) return x;
    if (r == 1.0) return std::abs(x) * x;
    if (r == 2.0) return x * x * x;
    if (x == 0.0) return 0.0;
    return std::pow(std::abs(x), r) * x;
}

namespace {

// (r + 1) |x|^r, derivative of signed_power in x.
double signed_power_derivative(double x, double r) noexcept {
    if (r == 0.0) return 1.0;
    if (r == 1.0) return 2.0 * std::abs(x);
    if (r == 2.0) return 3.0 * x * x;
    if (x == 0.0) return 0.0;
    return (r + 1.0) * std::pow(std::abs(x), r);
}

double abs_power(double x, double q) noexcept {
    if (q == 2.0) return x * x;
    if (q == 4.0) return (x * x) * (x * x);
    return std::pow(std::abs(x), q);
}

}  // namespace

double lemma31_gap(const Vector& a, const Vector& b, double r) {
    if (a.size() != b.size()) throw std::invalid_argument("lemma31_gap: dimension mismatch");
    if (r < 0.0) throw std::invalid_argument("lemma31_gap: need r >= 0");
    const double na = a.norm();
    const double nb = b.norm();
    const Vector d = a - b;
    const double lhs = (std::pow(na, r) * a - std::pow(nb, r) * b).dot(d);
    return lhs - std::pow(2.0, -r) * std::pow(d.norm(), r + 2.0);
}

DriftModel::DriftModel(DriftKind kind, SpacePtr space) : kind_(kind), space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("DriftModel: null space");
}

DriftModel DriftModel::reaction_diffusion(SpacePtr space, double p, double c) {
    if (p < 2.0)
        throw std::invalid_argument("reaction-diffusion: p in (1, 2) is not supported, need p >= 2");
    if (c < 0.0) throw std::invalid_argument("reaction-diffusion: need c >= 0");
    DriftModel d(DriftKind::ReactionDiffusion, std::move(space));
    d.p_ = 2.0;
    d.p_tilde_ = p;
    d.c_ = c;
    d.m_ = 1;
    d.alpha_ = 2.0;
    d.delta_ = 2.0;
    d.norm_ = NormKind::v(2.0, 1);
    return d;
}

DriftModel DriftModel::p_laplace(SpacePtr space, double p, double p_tilde, double c) {
    if (p < 2.0) throw std::invalid_argument("p-laplace: need p >= 2");
    if (p_tilde < 2.0 || p_tilde > p)
        throw std::invalid_argument("p-laplace: need 2 <= p_tilde <= p");
    if (c < 0.0) throw std::invalid_argument("p-laplace: need c >= 0");
    DriftModel d(DriftKind::PLaplace, std::move(space));
    d.p_ = p;
    d.p_tilde_ = p_tilde;
    d.c_ = c;
    d.m_ = 1;
    d.alpha_ = p;
    d.delta_ = std::pow(2.0, 3.0 - p);
    d.norm_ = NormKind::v(p, 1);
    return d;
}

DriftModel DriftModel::high_order(SpacePtr space, int m, double p, double p_tilde, double c) {
    if (m < 1) throw std::invalid_argument("high-order: need m >= 1");
    if (!space || 2 * m + 1 > space->size())
        throw std::invalid_argument("high-order: stencil does not fit on the grid");
    if (p < 2.0) throw std::invalid_argument("high-order: need p >= 2");
    if (p_tilde < 2.0 || p_tilde > p)
        throw std::invalid_argument("high-order: need 2 <= p_tilde <= p");
    if (c < 0.0) throw std::invalid_argument("high-order: need c >= 0");
    DriftModel d(DriftKind::HighOrder, std::move(space));
    d.p_ = p;
    d.p_tilde_ = p_tilde;
    d.c_ = c;
    d.m_ = m;
    d.alpha_ = p;
    d.delta_ = std::pow(2.0, 3.0 - p);
    d.norm_ = NormKind::v(p, m);
    return d;
}

DriftModel DriftModel::linear(SpacePtr space, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("linear: need lambda > 0");
    DriftModel d(DriftKind::Linear, std::move(space));
    d.lambda_ = lambda;
    d.m_ = 0;
    d.alpha_ = 2.0;
    d.delta_ = 2.0 * lambda;
    d.norm_ = NormKind::h();
    return d;
}

double DriftModel::n_functional(const Vector& u) const {
    if (m_ == 0) return space_->mesh() * u.squaredNorm();
    return space_->power_sum_v(u, alpha_, m_);
}

Vector DriftModel::negative_drift(const Vector& u) const {
    const int n = space_->size();
    if (u.size() != n) throw std::invalid_argument("apply_drift: length mismatch");
    Vector out = lambda_ * u;
    if (m_ > 0) {
        Vector w = space_->diff(u, m_);
        for (int i = 0; i < w.size(); ++i) w(i) = signed_power(w(i), p_ - 2.0);
        out += space_->diff_adjoint(w, m_);
    }
    if (c_ > 0.0)
        for (int j = 0; j < n; ++j) out(j) += c_ * signed_power(u(j), p_tilde_ - 2.0);
    return out;
}

void DriftModel::negative_jacobian(const Vector& u, BandedSpd& out) const {
    const int n = space_->size();
    if (out.size() != n || out.bandwidth() != m_) out = BandedSpd(n, m_);
    out.set_zero();
    if (m_ > 0) {
        // Signed binomial stencil, as in DiscreteSpace::diff.
        std::vector<double> s(static_cast<std::size_t>(m_) + 1);
        double binom = 1.0;
        for (int l = 0; l <= m_; ++l) {
            s[static_cast<std::size_t>(l)] = (l % 2 == 0 ? 1.0 : -1.0) * binom;
            binom = binom * (m_ - l) / (l + 1);
        }
        const double scale2 = std::pow(space_->mesh(), -2.0 * m_);
        const Vector w = space_->diff(u, m_);
        for (int i = 0; i < n + m_; ++i) {
            const double weight = scale2 * signed_power_derivative(w(i), p_ - 2.0);
            if (weight == 0.0) continue;
            for (int l1 = 0; l1 <= m_; ++l1) {
                const int j = i - l1;
                if (j < 0 || j >= n) continue;
                for (int l2 = l1; l2 <= m_; ++l2) {
                    const int k = i - l2;
                    if (k < 0) break;
                    out.lower(j, k) += weight * s[static_cast<std::size_t>(l1)] *
                                       s[static_cast<std::size_t>(l2)];
                }
            }
        }
    }
    for (int j = 0; j < n; ++j) {
        double d = lambda_;
        if (c_ > 0.0) d += c_ * signed_power_derivative(u(j), p_tilde_ - 2.0);
        out.lower(j, j) += d;
    }
}

Vector apply_drift(const DriftModel& model, const Vector& u) { return -model.negative_drift(u); }

double potential(const DriftModel& model, const Vector& u) {
    const auto& space = model.space();
    const double h = space.mesh();
    double phi = 0.5 * model.lambda() * h * u.squaredNorm();
    if (model.diff_order() > 0) {
        const Vector w = space.diff(u, model.diff_order());
        double acc = 0.0;
        for (int i = 0; i < w.size(); ++i) acc += abs_power(w(i), model.p());
        phi += h * acc / model.p();
    }
    if (model.c() > 0.0) {
        double acc = 0.0;
        for (int j = 0; j < u.size(); ++j) acc += abs_power(u(j), model.p_tilde());
        phi += model.c() * h * acc / model.p_tilde();
    }
    return phi;
}

MonotonicityReport check_monotonicity(const DriftModel& model, long sample_count,
                                      std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("check_monotonicity: need sample_count >= 1");
    const auto& space = model.space();
    const int n = space.size();
    Rng rng{seed};
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    const double scales[3] = {0.01, 1.0, 100.0};
    const double delta = model.delta();
    const double gamma = model.gamma();

    MonotonicityReport rep;
    rep.delta_hat = std::numeric_limits<double>::infinity();
    rep.gamma_hat = -std::numeric_limits<double>::infinity();
    rep.K_hat = -std::numeric_limits<double>::infinity();
    rep.coercivity_margin = std::numeric_limits<double>::infinity();
    rep.lemma_delta = model.kind() == DriftKind::Linear ? 2.0 * model.lambda()
                      : model.kind() == DriftKind::ReactionDiffusion
                          ? 2.0
                          : std::pow(2.0, 3.0 - model.p());
    rep.samples = sample_count;

    auto random_with_norm = [&](double target) {
        Vector u(n);
        for (int j = 0; j < n; ++j) u(j) = normal(rng);
        return Vector(u * (target / space.norm_h(u)));
    };

    for (long s = 0; s < sample_count; ++s) {
        const double scale = scales[s % 3];
        const Vector u = random_with_norm(scale);
        Vector v;
        switch (s % 7) {
            case 0: v = -u; break;   // antipodal pairs are extremal for the edgewise bound
            case 1: v = u; break;
            default: v = random_with_norm(scale * unif(rng)); break;
        }
        const Vector d = u - v;
        const double lhs = 2.0 * space.inner(apply_drift(model, u) - apply_drift(model, v), d);
        const double nd = model.n_functional(d);
        const double d2 = space.inner(d, d);
        const double tol = 1e-9 * (std::abs(lhs) + delta * nd + std::abs(gamma) * d2) + 1e-300;
        if (lhs > -delta * nd + gamma * d2 + tol) ++rep.violations;
        if (nd > 0.0) rep.delta_hat = std::min(rep.delta_hat, (gamma * d2 - lhs) / nd);
        if (d2 > 0.0) {
            rep.gamma_hat = std::max(rep.gamma_hat, (lhs + delta * nd) / d2);
            rep.K_hat = std::max(rep.K_hat, lhs / d2);
        }
        // Coercivity with A(0) = 0.
        const double au = 2.0 * space.inner(apply_drift(model, u), u);
        const double nu = model.n_functional(u);
        const double margin = -au - delta * nu + gamma * space.inner(u, u);
        rep.coercivity_margin = std::min(rep.coercivity_margin, margin);
        if (margin < -1e-9 * (std::abs(au) + delta * nu)) ++rep.violations;
    }
    return rep;
}

}  // namespace monospde
