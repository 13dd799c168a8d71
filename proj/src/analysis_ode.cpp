#include "monospde/analysis.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monospde {

namespace {

using State = std::vector<double>;

std::vector<double> report_times(double T, double dt) {
    const std::size_t K = step_count(T, dt);
    std::vector<double> t(K + 1);
    for (std::size_t k = 0; k <= K; ++k) t[k] = static_cast<double>(k) * dt;
    t.back() = T;
    return t;
}

template <class System>
OdePath integrate_reported(System&& system, double y0, double T, double dt, double abs_tol,
                           double rel_tol) {
    namespace odeint = boost::numeric::odeint;
    OdePath path;
    path.times = report_times(T, dt);
    path.values.reserve(path.times.size());
    State y{y0};
    if (path.times.size() == 1) {
        path.values.push_back(y0);
        return path;
    }
    auto stepper = odeint::make_dense_output(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>());
    // Stiff starts from huge data: begin small and let the controller grow the step.
    odeint::integrate_times(stepper, system, y, path.times.begin(), path.times.end(),
                            std::min(dt / 4.0, 1e-9 * (1.0 + T)),
                            [&](const State& s, double) { path.values.push_back(s[0]); });
    return path;
}

}  // namespace

OdePath solve_comparison_ode(double c, double alpha, double h0, double T, double dt) {
    if (!(alpha > 2.0)) throw std::invalid_argument("comparison ODE: need alpha > 2");
    if (!(c > 0.0) || !(h0 > 0.0)) throw std::invalid_argument("comparison ODE: need c, h0 > 0");
    const double half = alpha / 2.0;
    auto rhs = [c, half](const State& h, State& dh, double) {
        dh[0] = -c * std::pow(std::max(h[0], 0.0), half);
    };
    return integrate_reported(rhs, h0, T, dt, 1e-300, 1e-12);
}

double comparison_envelope(double c, double alpha, double t) {
    if (!(alpha > 2.0)) throw std::invalid_argument("comparison envelope: need alpha > 2");
    return std::pow(c * (alpha / 2.0 - 1.0) * t, -2.0 / (alpha - 2.0));
}

OdePath solve_log_moment_ode(double c, double theta, double eps0, double alpha, double log_h0,
                             double T, double dt) {
    if (!(alpha > 2.0)) throw std::invalid_argument("log-moment ODE: need alpha > 2");
    if (!(c >= 0.0) || !(theta > 0.0) || !(eps0 > 0.0))
        throw std::invalid_argument("log-moment ODE: need c >= 0, theta > 0, eps0 > 0");
    const double k = (2.0 * alpha - 2.0) / alpha;
    const double pull = theta * std::pow(eps0, -k);
    // g = log h: g' = c e^{-g} - pull g^k.
    auto rhs = [c, k, pull](const State& g, State& dg, double) {
        // Clamped so an overshooting trial step yields a finite error and is rejected.
        dg[0] = c * std::exp(-std::max(g[0], -700.0)) - pull * std::pow(std::max(g[0], 0.0), k);
    };
    return integrate_reported(rhs, log_h0, T, dt, 1e-12, 1e-12);
}

}  // namespace monospde
