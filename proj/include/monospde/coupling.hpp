#pragma once

#include "monospde/ensemble.hpp"
#include "monospde/integrator.hpp"
#include "monospde/stats.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace monospde {

/// Control schedule of the coupled system. beta is tabulated on the simulation grid.
struct CouplingParams {
    double epsilon = 0.0;     // 1 - alpha / (sigma + 2)
    double c_const = 0.0;
    double T = 0.0;
    double dt = 0.0;
    double distance0 = 0.0;   // |x - y|_H
    double couple_tol = 0.0;
    std::vector<double> beta;  // beta at t_k = k dt, k = 0..K
    double lemma_integral = 0.0;  // int_0^T beta_t e^{-(eps/2) int gamma} dt
    double lemma_target = 0.0;    // (2 / eps) |x - y|^eps

    double beta_at(std::size_t k) const { return beta[k < beta.size() ? k : beta.size() - 1]; }
    /// T^{(sigma-2)/sigma} (c^sigma |x-y|^{2 eps})^{2/sigma}.
    double quad_var_bound(double sigma) const;
};

double coupling_epsilon(double alpha, double sigma);

CouplingParams make_params(const SdeProblem& problem, const Vector& x, const Vector& y, double T,
                           double dt);

struct CouplingRecord {
    std::vector<double> times;    // filled only when paths are stored
    std::vector<Vector> x_path;
    std::vector<Vector> y_path;
    std::vector<double> distance;  // |X - Y|_H on the grid, stored paths only

    Vector x_final;
    Vector y_final;
    double tau = std::numeric_limits<double>::infinity();
    double stoch_int = 0.0;  // sum <zeta_k, dW_k>_U
    double quad_var = 0.0;   // sum |zeta_k|_U^2 dt
    double R = 1.0;          // exp(-stoch_int - quad_var / 2)
    bool coupled = false;
    double max_distance_increase = 0.0;  // largest step-to-step growth of |X - Y|_H
    long control_steps = 0;              // steps with nonzero zeta
};

struct CouplingOptions {
    bool store_paths = false;
    ProxOptions prox{};
};

/// Simulates X from x and the controlled Y from y with shared increments.
CouplingRecord simulate_coupled(const SdeProblem& problem, const CouplingParams& params,
                                const Vector& x, const Vector& y, Rng& rng,
                                const CouplingOptions& opts = {});
/// Convenience overload; x == y short-circuits to tau = 0, R = 1.
CouplingRecord simulate_coupled(const SdeProblem& problem, const Vector& x, const Vector& y,
                                double T, double dt, Rng& rng, const CouplingOptions& opts = {});

/// Coupled ensemble on stream Coupled; trajectories are not stored.
std::vector<CouplingRecord> coupled_ensemble(const SdeProblem& problem, const CouplingParams& params,
                                             const Vector& x, const Vector& y,
                                             const EnsembleSpec& spec);

struct CoupledSummary {
    double coupled_fraction = 0.0;
    Estimate R;
    double max_quad_var = 0.0;
    double quad_var_bound = 0.0;
    long quad_var_violations = 0;  // paths above bound * 1.05
};
CoupledSummary summarize(const std::vector<CouplingRecord>& records, const CouplingParams& params,
                         double sigma);

struct WeightedLawReport {
    Estimate weighted;  // E[R F(Y_T)]
    Estimate direct;    // E[F(X_T(y))], independent ensemble
    double z_score = 0.0;
    bool pass = false;
};

WeightedLawReport verify_weighted_law(const SdeProblem& problem, const Vector& x, const Vector& y,
                                      double T, const Observable& F, const EnsembleSpec& spec);

struct GirsanovMomentReport {
    double p = 0.0;
    double exponent = 0.0;  // p' = p / (p - 1)
    Estimate empirical;     // E[R^{p'}]
    double bound = 0.0;
    bool pass = false;
    bool heavy_tail_warning = false;
};

/// exp[p'(p'-1)/2 * T^{(sigma-2)/sigma} (c^sigma |x-y|^{2 eps})^{2/sigma}].
double girsanov_moment_bound(const CouplingParams& params, double sigma, double p);

GirsanovMomentReport girsanov_moment(const std::vector<CouplingRecord>& records,
                                     const CouplingParams& params, double sigma, double p);

}  // namespace monospde
