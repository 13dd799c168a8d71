#pragma once

#include "monospde/banded.hpp"
#include "monospde/space.hpp"

#include <cstdint>
#include <string>

namespace monospde {

enum class DriftKind { ReactionDiffusion, PLaplace, HighOrder, Linear };

std::string to_string(DriftKind kind);

/// |x|^r x.
double signed_power(double x, double r) noexcept;

/// <|a|^r a - |b|^r b, a - b> - 2^{-r} |a - b|^{r+2} in the Euclidean space of a, b.
double lemma31_gap(const Vector& a, const Vector& b, double r);

/// A monotone drift A = -grad_H Phi on a DiscreteSpace.
///
/// Every kind is written in the common form
///   -A(u) = (D^m)^T (|D^m u|^{q-2} D^m u) + c |u|^{r-2} u + lambda u
/// with (m, q, r, lambda) fixed by the kind; Linear has no difference part.
/// The dissipativity constants (delta, gamma) are the configured ones for
///   2 <A(u) - A(v), u - v> <= -delta N(u - v) + gamma |u - v|_H^2,
/// with N(u) = |u|_V^alpha.
class DriftModel {
public:
    static DriftModel reaction_diffusion(SpacePtr space, double p, double c);
    static DriftModel p_laplace(SpacePtr space, double p, double p_tilde, double c);
    static DriftModel high_order(SpacePtr space, int m, double p, double p_tilde, double c);
    static DriftModel linear(SpacePtr space, double lambda);

    DriftKind kind() const noexcept { return kind_; }
    const DiscreteSpace& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }

    double alpha() const noexcept { return alpha_; }
    double delta() const noexcept { return delta_; }
    double gamma() const noexcept { return gamma_; }
    /// Norm whose alpha-th power is N.
    NormKind coercivity_norm() const noexcept { return norm_; }

    double p() const noexcept { return p_; }
    double p_tilde() const noexcept { return p_tilde_; }
    double c() const noexcept { return c_; }
    double lambda() const noexcept { return lambda_; }
    int diff_order() const noexcept { return m_; }

    /// N(u) = |u|_V^alpha.
    double n_functional(const Vector& u) const;

    /// -A(u).
    Vector negative_drift(const Vector& u) const;
    /// Jacobian of -A at u (symmetric positive semidefinite, bandwidth diff_order()).
    void negative_jacobian(const Vector& u, BandedSpd& out) const;

private:
    DriftModel(DriftKind kind, SpacePtr space);

    DriftKind kind_;
    SpacePtr space_;
    double p_ = 2.0;         // exponent of the difference part
    double p_tilde_ = 2.0;   // exponent of the reaction part
    double c_ = 0.0;
    double lambda_ = 0.0;
    int m_ = 1;              // 0 for Linear (no difference part)
    double alpha_ = 2.0;
    double delta_ = 0.0;
    double gamma_ = 0.0;
    NormKind norm_{};
};

Vector apply_drift(const DriftModel& model, const Vector& u);

/// Convex potential Phi with A = -grad_H Phi.
double potential(const DriftModel& model, const Vector& u);

struct MonotonicityReport {
    double delta_hat = 0.0;          // largest delta consistent with every sample (gamma fixed)
    double gamma_hat = 0.0;          // smallest gamma consistent with every sample (delta fixed)
    double K_hat = 0.0;              // max 2<A(u)-A(v), u-v> / |u-v|_H^2
    double coercivity_margin = 0.0;  // min -2<A(u),u> - delta N(u) + gamma |u|_H^2
    double lemma_delta = 0.0;        // edgewise prediction 2^{3-p} (difference kinds), 2 lambda (Linear)
    long samples = 0;
    long violations = 0;
};

/// Samples random pairs at H-norm scales {0.01, 1, 100} and checks the configured
/// dissipativity inequality.
MonotonicityReport check_monotonicity(const DriftModel& model, long sample_count,
                                      std::uint64_t seed);

}  // namespace monospde
