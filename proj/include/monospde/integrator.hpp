#pragma once

#include "monospde/drift.hpp"
#include "monospde/noise.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace monospde {

/// Implicit step failed to reach its residual tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, long step = -1)
        : std::runtime_error(what), residual_(residual), step_(step) {}
    double residual() const noexcept { return residual_; }
    long step() const noexcept { return step_; }

private:
    double residual_;
    long step_;
};

struct ProxOptions {
    double tol = 1e-10;  // relative to 1 + |rhs|_H
    int max_iter = 200;
};

struct ProxStats {
    int iterations = 0;
    double residual = 0.0;
    bool used_fallback = false;
};

/// Resolvent of the drift: the u with u - dt A(u) = rhs, i.e. the minimizer of
/// 0.5 |u - rhs|_H^2 + dt Phi(u). Damped Newton with an Armijo line search on that
/// objective; falls back to steepest descent if Newton stalls. `guess` (default rhs)
/// only affects the iteration count, not the solution.
Vector proximal_solve(const DriftModel& model, const Vector& rhs, double dt,
                      const ProxOptions& opts = {}, ProxStats* stats = nullptr,
                      const Vector* guess = nullptr);

/// Discrete analogue of dX = A(X) dt + B dW with the Harnack parameters attached.
struct SdeProblem {
    std::shared_ptr<const DriftModel> drift;
    std::optional<NoiseModel> noise;  // empty means B = 0
    double sigma = 2.0;
    double xi = 0.0;   // certified (c2) constant
    double c0 = 0.0;   // embedding constant |.|_V^2 >= c0 |.|_H^2
    bool xi_closed_form = false;

    /// Validates sigma >= 2, sigma > alpha - 2 and fills xi, c0.
    static SdeProblem make(std::shared_ptr<const DriftModel> drift, NoiseModel noise,
                           double sigma);
    /// Same drift with the noise switched off.
    SdeProblem without_noise() const;

    const DiscreteSpace& space() const { return drift->space(); }
    double alpha() const { return drift->alpha(); }
    double hs_norm_sq() const { return noise ? noise->hs_norm_sq() : 0.0; }
};

/// Coefficients (c, theta1) of the energy inequality
///   |X_{k+1}|^2 <= |X_k|^2 + dt (c - theta1 N(X_{k+1})) + martingale increment.
struct EnergyCoefficients {
    double c = 0.0;
    double theta1 = 0.0;
};
EnergyCoefficients energy_coefficients(const SdeProblem& problem);

struct EnergyLedger {
    long steps = 0;
    long violations = 0;
    double max_excess = 0.0;  // largest (lhs - rhs) seen, <= 0 when clean
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> norm_h;
    std::vector<double> norm_v;
    EnergyLedger ledger;
};

/// One split step X+ = X + B dW, X' = resolvent(X+). Owns its scratch space.
class Stepper {
public:
    Stepper(const SdeProblem& problem, double dt, ProxOptions opts = {});

    double dt() const noexcept { return dt_; }
    /// Advances x in place using the increment image; `extra` is added to the
    /// implicit right-hand side (used by the coupling drift).
    void step(Vector& x, const Vector* noise_image, const Vector* extra = nullptr);
    /// Draws an increment from rng and advances x.
    void step(Vector& x, Rng& rng);
    const WienerIncrement& last_increment() const noexcept { return inc_; }
    const ProxStats& last_stats() const noexcept { return stats_; }

private:
    const SdeProblem* problem_;
    double dt_;
    ProxOptions opts_;
    WienerIncrement inc_;
    ProxStats stats_;
    Vector rhs_;
};

std::size_t step_count(double T, double dt);

Trajectory simulate(const SdeProblem& problem, const Vector& x0, double T, double dt,
                    Rng& rng, const ProxOptions& opts = {});

/// Noise-free trajectory of the same drift.
Trajectory deterministic_flow(const SdeProblem& problem, const Vector& x0, double T, double dt,
                              const ProxOptions& opts = {});

}  // namespace monospde
