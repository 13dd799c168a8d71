#pragma once

#include "monospde/coupling.hpp"
#include "monospde/ensemble.hpp"
#include "monospde/integrator.hpp"
#include "monospde/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace monospde {

// ---------------------------------------------------------------------------
// Harnack constant

/// Closed form for time-independent delta, xi and gamma = 0:
///   2 (sigma+2)^{2+2/sigma} / [(sigma+2-alpha)^{2+2/sigma} (delta xi)^{2/sigma} t^{(sigma+2)/sigma}].
double harnack_constant(double t, double sigma, double alpha, double delta, double xi);

using TimeFunction = std::function<double(double)>;

/// General form by adaptive quadrature of
///   int_0^t (delta_s xi_s)^{1/sigma} exp((alpha-2-sigma)/(2 sigma) int_0^s gamma) ds.
double harnack_constant(double t, double sigma, double alpha, const TimeFunction& delta,
                        const TimeFunction& xi, const TimeFunction& gamma);

/// Constant-coefficient convenience overload of the quadrature route.
double harnack_constant_quadrature(double t, double sigma, double alpha, double delta, double xi,
                                   double gamma);

/// Distance exponent 2 + 2(2 - alpha)/sigma.
double harnack_distance_exponent(double alpha, double sigma);

void validate_harnack_parameters(double sigma, double alpha);

// ---------------------------------------------------------------------------
// Built-in positive bounded test functions (version 1)

struct TestFunction {
    enum class Kind { GaussianBump, SmoothedIndicator, Constant };

    Kind kind = Kind::GaussianBump;
    Vector center;          // empty means the origin
    double radius = 1.0;    // smoothed indicator
    double width = 0.1;     // smoothed indicator
    double value = 1.0;     // constant

    static constexpr int version = 1;

    /// exp(-|x - z|_H^2).
    static TestFunction gaussian_bump(Vector center = {});
    /// 0.5 (1 - tanh((|x - z|_H - radius) / width)).
    static TestFunction smoothed_indicator(double radius, double width, Vector center = {});
    static TestFunction constant(double value = 1.0);
    static TestFunction from_name(const std::string& name);

    std::string id() const;
    double operator()(const DiscreteSpace& space, const Vector& x) const;
    Observable bind(const DiscreteSpace& space) const;
};

// ---------------------------------------------------------------------------
// Harnack verification

struct OuHarnackCell {
    double lhs = 0.0;         // (P_T F(y))^p
    double rhs_moment = 0.0;  // P_T F^p(x)
    double rhs_factor = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Scalar OU dX = -lambda X dt + b dW: both sides of the Harnack inequality by
/// quadrature against the exact Gaussian transition kernel.
OuHarnackCell ou_harnack_quadrature(double lambda, double b, double T, double p, double x, double y,
                                    const std::function<double(double)>& F);

struct HarnackReport {
    double p = 0.0;
    double T = 0.0;
    double sigma = 0.0;
    double distance = 0.0;
    double constant = 0.0;  // C(T, sigma)
    std::string f_id;
    Estimate mean_f_y;      // E F(X_T(y))
    Estimate mean_fp_x;     // E F^p(X_T(x))
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs_factor = 1.0;
    double rhs = 0.0;
    double rhs_se = 0.0;
    bool pass = false;
    bool power_warning = false;
    std::optional<OuHarnackCell> exact;  // Linear drift with a separable F
};

HarnackReport verify_harnack(const SdeProblem& problem, const Vector& x, const Vector& y, double T,
                             double p, const TestFunction& F, const EnsembleSpec& spec);

// ---------------------------------------------------------------------------
// Comparison ODEs

struct OdePath {
    std::vector<double> times;
    std::vector<double> values;
};

/// h' = -c h^{alpha/2}, h(0) = h0, reported every `dt` up to T.
OdePath solve_comparison_ode(double c, double alpha, double h0, double T, double dt);

/// Initial-data-free envelope (c (alpha/2 - 1) t)^{-2/(alpha-2)}.
double comparison_envelope(double c, double alpha, double t);

/// log h for h' = c - theta eps0^{-(2 alpha-2)/alpha} h (log h)^{(2 alpha-2)/alpha},
/// integrated in log space so that huge h(0) stays representable.
OdePath solve_log_moment_ode(double c, double theta, double eps0, double alpha, double log_h0,
                             double T, double dt);

// ---------------------------------------------------------------------------
// Rate fits

struct RateFit {
    std::vector<double> abscissa;
    std::vector<double> ordinate;
    std::vector<double> ordinate_se;
    double fitted = 0.0;  // slope (log-log exponent or log-linear rate)
    double fitted_se = 0.0;
    double target = 0.0;
    double relative_error = 0.0;
    double r_squared = 0.0;
    bool fit_warning = false;
    bool skipped = false;  // e.g. exact coupling at x == y
    std::string note;
};

struct DecayFit {
    RateFit norm;  // log sup_x |X_t(x)|_H vs log t, target -1/(alpha-2)
    RateFit pair;  // log sup_{x,y} |X_t(x) - X_t(y)|_H^2 vs log t, target -2/(alpha-2)
};

DecayFit fit_decay(const SdeProblem& problem, const std::vector<Vector>& x0_set,
                   const std::vector<double>& times, double dt, const ProxOptions& prox = {});

/// Same-noise pairs; log of the geometric-mean distance fitted against t.
RateFit fit_contraction(const SdeProblem& problem, const Vector& x, const Vector& y,
                        const std::vector<double>& times, const EnsembleSpec& spec);

// ---------------------------------------------------------------------------
// Invariant measure

struct InvariantOptions {
    double burn_in = 10.0;
    double horizon = 1000.0;
    double dt = 1e-2;
    double eps0 = 0.0;   // <= 0 selects the default half of the analytic threshold
    std::size_t batches = 50;
    double sample_every = 0.0;  // <= 0 selects the fitted autocorrelation time
    std::size_t histogram_bins = 40;
    ProxOptions prox{};
};

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density;
};

struct InvariantEstimate {
    Estimate moment_v_alpha;          // time average of |X|_V^alpha
    Estimate exp_moment;              // time average of exp(eps0 |X|_H^alpha)
    bool exp_overflow = false;
    double eps0 = 0.0;
    double eps0_threshold = 0.0;
    Estimate second_moment_h;         // time average of |X|_H^2
    std::vector<Estimate> mode_second_moments;  // time averages of <X, e_k>^2
    double energy_bound = 0.0;        // c / theta1
    EnergyLedger ledger;
    Histogram histogram;              // of |X|_H
    double autocorrelation_time = 0.0;
    std::vector<Vector> samples;      // thinned states, for density_bound
    double burn_in = 0.0;
    double horizon = 0.0;
};

/// delta kappa_alpha / (alpha |B|_op^2): exponential moments of order eps0 below
/// this are controlled by the energy inequality.
double exp_moment_threshold(const SdeProblem& problem);

InvariantEstimate estimate_invariant(const SdeProblem& problem, const InvariantOptions& opts,
                                     Rng& rng);

// ---------------------------------------------------------------------------
// Ergodic rate

struct ErgodicOptions {
    /// Empty selects 10 grid times spanning 3 / target (alpha = 2) or
    /// three autocorrelation times of the invariant run (alpha > 2).
    std::vector<double> times;
    double dt = 1e-3;
    std::size_t n_paths = 2000;
    std::uint64_t seed = 0;
    Execution exec = Execution::Parallel;
    InvariantOptions invariant{};  // used for mu(F)
};

struct ErgodicFit {
    std::vector<RateFit> per_start;  // one fit per x in x_set
    double mu_f = 0.0;
    double mu_f_se = 0.0;
    double eta = 0.0;       // slowest fitted rate over the starts
    double eta_se = 0.0;
    double target = 0.0;    // (c0 delta - gamma)/2 for alpha = 2, 0 when no formula
    bool has_target = false;
    double relative_error = 0.0;
    double p_gap = 2.0;
    double gap_implication = 0.0;  // (p - 1) eta / p
    bool positive_at_3se = false;
};

ErgodicFit fit_ergodic_rate(const SdeProblem& problem, const Observable& F,
                            const std::vector<Vector>& x_set, const ErgodicOptions& opts);

// ---------------------------------------------------------------------------
// Density and ultraboundedness

struct DensityBound {
    double value = 0.0;
    std::size_t effective_samples = 0;
    bool sample_warning = false;
};

/// {int exp[-p C(t,sigma) |x - y|^{kappa}] mu(dy)}^{-(p-1)/p} over invariant samples.
DensityBound density_bound(const InvariantEstimate& invariant, const Vector& x, double t, double p,
                           const SdeProblem& problem);

struct UltraboundOptions {
    std::vector<double> x_norms{1.0, 10.0, 100.0};
    std::size_t n_paths = 200;
    double dt = 1e-3;
    std::uint64_t seed = 0;
    Execution exec = Execution::Parallel;
    double independence_from = 0.5;  // x-independence checked for t >= this
    ProxOptions prox{};
};

struct UltraboundProfile {
    std::vector<double> t_grid;
    std::vector<std::vector<double>> log_moment;  // [x index][t] log E exp(eps0 |X_t(x)|^alpha)
    std::vector<double> sup_log_moment;           // max over x
    double fitted_C = 0.0;                        // min C with sup <= C (1 + t^{-alpha/(alpha-2)})
    double envelope_exponent = 0.0;               // -alpha/(alpha-2)
    double x_spread = 0.0;                        // max over t >= independence_from of spread in x
    double eps0 = 0.0;
    double ode_c = 0.0;
    double ode_theta = 0.0;
    std::vector<OdePath> ode_paths;               // log h per x
    double ode_bound_c0 = 0.0;                    // min c0 with log h <= c0 (1 + t^{-alpha/(alpha-2)})
    double ode_merge_gap = 0.0;                   // relative gap in h across x at t = 1
};

UltraboundProfile ultrabound_profile(const SdeProblem& problem, const std::vector<double>& t_grid,
                                     double eps0, const UltraboundOptions& opts);

}  // namespace monospde
