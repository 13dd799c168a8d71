#pragma once

#include "monospde/rng.hpp"
#include "monospde/space.hpp"

#include <cstdint>

namespace monospde {

class DriftModel;

/// Additive noise B = scale * (-Delta_h)^{-theta}, diagonal in the Laplacian
/// eigenbasis. U is identified with H through that basis, so U-coordinates are
/// eigen-coordinates.
class NoiseModel {
public:
    NoiseModel(SpacePtr space, double theta, double scale);

    double theta() const noexcept { return theta_; }
    double scale() const noexcept { return scale_; }
    /// b_k = scale * lambda_k^{-theta}.
    const Vector& coefficients() const noexcept { return b_; }
    double hs_norm_sq() const noexcept { return hs_norm_sq_; }
    double op_norm_sq() const noexcept { return op_norm_sq_; }
    /// min_k b_k sqrt(lambda_k).
    double c2_lower_constant() const noexcept { return c2_lower_; }
    const DiscreteSpace& space() const noexcept { return *space_; }

    /// U-coordinates -> H vector.
    Vector apply_b(const Vector& u_coords) const;
    /// H vector -> U-coordinates <u, e_k>_H / b_k.
    Vector apply_b_inverse(const Vector& u) const;
    /// |B^{-1} u|_U.
    double b_norm(const Vector& u) const { return apply_b_inverse(u).norm(); }

private:
    SpacePtr space_;
    double theta_;
    double scale_;
    Vector b_;
    double hs_norm_sq_ = 0.0;
    double op_norm_sq_ = 0.0;
    double c2_lower_ = 0.0;
};

NoiseModel build_noise(SpacePtr space, double theta, double scale);

struct WienerIncrement {
    Vector dW_u;   // U-coordinates, i.i.d. Normal(0, dt)
    double dt = 0.0;
    Vector image_h;  // B dW in H
};

WienerIncrement sample_increment(const NoiseModel& model, double dt, Rng& rng);
/// Same draw, written into preallocated buffers.
void sample_increment_into(const NoiseModel& model, double dt, Rng& rng, WienerIncrement& out);

/// Empirical infimum of N(u) / (|u|_B^sigma |u|_H^{alpha - sigma}) over random u.
double xi_constant(const NoiseModel& noise, const DriftModel& drift, double sigma,
                   long sample_count, std::uint64_t seed);

/// Lower bound for the (c2) constant used by the Harnack machinery.
///
/// When alpha == sigma it is exact for the discrete space: the p = 2 constant is the
/// smallest generalized eigenvalue of N against |.|_B^2, lifted to alpha > 2 by Hölder.
/// Otherwise it falls back to 0.9 times the empirical xi_constant.
struct CertifiedXi {
    double value = 0.0;
    bool closed_form = false;
};
CertifiedXi certified_xi(const NoiseModel& noise, const DriftModel& drift, double sigma,
                         std::uint64_t seed = 0x5eed);

}  // namespace monospde
