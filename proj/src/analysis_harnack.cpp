#include "monospde/analysis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monospde {

void validate_harnack_parameters(double sigma, double alpha) {
    if (!(sigma >= 2.0) || !(sigma > alpha - 2.0))
        throw std::invalid_argument("harnack: need sigma >= 2 and sigma > alpha - 2");
}

namespace {

double shape_factor(double sigma, double alpha) {
    return std::pow((sigma + 2.0) / (sigma + 2.0 - alpha), 2.0 + 2.0 / sigma);
}

}  // namespace

double harnack_constant(double t, double sigma, double alpha, double delta, double xi) {
    validate_harnack_parameters(sigma, alpha);
    if (!(t > 0.0)) throw std::invalid_argument("harnack: need t > 0");
    if (!(delta > 0.0) || !(xi > 0.0)) throw std::invalid_argument("harnack: need delta, xi > 0");
    return 2.0 * shape_factor(sigma, alpha) /
           (std::pow(delta * xi, 2.0 / sigma) * std::pow(t, (sigma + 2.0) / sigma));
}

double harnack_constant(double t, double sigma, double alpha, const TimeFunction& delta,
                        const TimeFunction& xi, const TimeFunction& gamma) {
    validate_harnack_parameters(sigma, alpha);
    if (!(t > 0.0)) throw std::invalid_argument("harnack: need t > 0");
    using boost::math::quadrature::gauss_kronrod;
    const double rate = (alpha - 2.0 - sigma) / (2.0 * sigma);
    auto integrand = [&](double s) {
        const double ds = delta(s);
        const double xs = xi(s);
        if (!(ds > 0.0) || !(xs > 0.0)) throw std::invalid_argument("harnack: need delta, xi > 0");
        const double g = s > 0.0 ? gauss_kronrod<double, 31>::integrate(gamma, 0.0, s, 10, 1e-13) : 0.0;
        return std::pow(ds * xs, 1.0 / sigma) * std::exp(rate * g);
    };
    const double integral = gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 10, 1e-13);
    return 2.0 * std::pow(t, (sigma - 2.0) / sigma) * shape_factor(sigma, alpha) /
           (integral * integral);
}

double harnack_constant_quadrature(double t, double sigma, double alpha, double delta, double xi,
                                   double gamma) {
    return harnack_constant(
        t, sigma, alpha, [delta](double) { return delta; }, [xi](double) { return xi; },
        [gamma](double) { return gamma; });
}

double harnack_distance_exponent(double alpha, double sigma) {
    return 2.0 + 2.0 * (2.0 - alpha) / sigma;
}

TestFunction TestFunction::gaussian_bump(Vector center) {
    TestFunction f;
    f.kind = Kind::GaussianBump;
    f.center = std::move(center);
    return f;
}

TestFunction TestFunction::smoothed_indicator(double radius, double width, Vector center) {
    if (!(radius > 0.0) || !(width > 0.0))
        throw std::invalid_argument("smoothed_indicator: need radius, width > 0");
    TestFunction f;
    f.kind = Kind::SmoothedIndicator;
    f.radius = radius;
    f.width = width;
    f.center = std::move(center);
    return f;
}

TestFunction TestFunction::constant(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("constant test function: need value > 0");
    TestFunction f;
    f.kind = Kind::Constant;
    f.value = value;
    return f;
}

TestFunction TestFunction::from_name(const std::string& name) {
    if (name == "gaussian_bump") return gaussian_bump();
    if (name == "smoothed_indicator") return smoothed_indicator(1.0, 0.1);
    if (name == "constant") return constant(1.0);
    throw std::invalid_argument("unknown test function '" + name + "'");
}

std::string TestFunction::id() const {
    std::ostringstream os;
    os.precision(6);
    switch (kind) {
        case Kind::GaussianBump: os << "gaussian_bump"; break;
        case Kind::SmoothedIndicator:
            os << "smoothed_indicator(r=" << radius << ",w=" << width << ")";
            break;
        case Kind::Constant: os << "constant(" << value << ")"; break;
    }
    if (center.size() > 0 && kind != Kind::Constant) os << "@center";
    os << "/v" << version;
    return os.str();
}

double TestFunction::operator()(const DiscreteSpace& space, const Vector& x) const {
    if (kind == Kind::Constant) return value;
    const double d = center.size() > 0 ? space.norm_h(x - center) : space.norm_h(x);
    if (kind == Kind::GaussianBump) return std::exp(-d * d);
    return 0.5 * (1.0 - std::tanh((d - radius) / width));
}

Observable TestFunction::bind(const DiscreteSpace& space) const {
    return [f = *this, &space](const Vector& x) { return f(space, x); };
}

namespace {

// E g(Z) for Z ~ Normal(m, s^2).
double gaussian_expectation(double m, double s, const std::function<double(double)>& g) {
    using boost::math::quadrature::gauss_kronrod;
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    auto integrand = [&](double u) { return g(m + s * u) * kInvSqrt2Pi * std::exp(-0.5 * u * u); };
    return gauss_kronrod<double, 61>::integrate(integrand, -12.0, 12.0, 15, 1e-14);
}

struct OuKernel {
    double decay;  // e^{-lambda T}
    double sd;     // transition standard deviation
};

OuKernel ou_kernel(double lambda, double b, double T) {
    if (!(lambda > 0.0) || !(b > 0.0) || !(T > 0.0))
        throw std::invalid_argument("ou: need lambda, b, T > 0");
    return {std::exp(-lambda * T), b * std::sqrt(-std::expm1(-2.0 * lambda * T) / (2.0 * lambda))};
}

}  // namespace

OuHarnackCell ou_harnack_quadrature(double lambda, double b, double T, double p, double x, double y,
                                    const std::function<double(double)>& F) {
    if (!(p > 1.0)) throw std::invalid_argument("ou_harnack_quadrature: need p > 1");
    const OuKernel k = ou_kernel(lambda, b, T);
    OuHarnackCell cell;
    cell.lhs = std::pow(gaussian_expectation(k.decay * y, k.sd, F), p);
    cell.rhs_moment =
        gaussian_expectation(k.decay * x, k.sd, [&](double z) { return std::pow(F(z), p); });
    const double C = harnack_constant(T, 2.0, 2.0, 2.0 * lambda, b * b);
    cell.rhs_factor = std::exp(p / (p - 1.0) * C * (x - y) * (x - y));
    cell.rhs = cell.rhs_moment * cell.rhs_factor;
    cell.holds = cell.lhs <= cell.rhs * (1.0 + 1e-12);
    return cell;
}

namespace {

// Gaussian bumps and constants factor over eigen-coordinates, so for a linear drift
// both sides of the inequality are products of scalar OU integrals.
std::optional<OuHarnackCell> exact_linear_cell(const SdeProblem& problem, const Vector& x,
                                               const Vector& y, double T, double p,
                                               const TestFunction& F, double rhs_factor) {
    if (problem.drift->kind() != DriftKind::Linear || !problem.noise) return std::nullopt;
    if (F.kind == TestFunction::Kind::SmoothedIndicator) return std::nullopt;
    const auto& space = problem.space();
    const Vector mx = space.to_modes(x);
    const Vector my = space.to_modes(y);
    const Vector mc = F.center.size() > 0 ? space.to_modes(F.center) : Vector::Zero(space.size());
    const Vector& b = problem.noise->coefficients();
    OuHarnackCell cell;
    if (F.kind == TestFunction::Kind::Constant) {
        cell.lhs = std::pow(F.value, p);
        cell.rhs_moment = std::pow(F.value, p);
    } else {
        double ey = 1.0;
        double ex = 1.0;
        for (int k = 0; k < space.size(); ++k) {
            const OuKernel ker = ou_kernel(problem.drift->lambda(), b(k), T);
            const double c = mc(k);
            ey *= gaussian_expectation(ker.decay * my(k), ker.sd,
                                       [c](double z) { return std::exp(-(z - c) * (z - c)); });
            ex *= gaussian_expectation(ker.decay * mx(k), ker.sd,
                                       [c, p](double z) { return std::exp(-p * (z - c) * (z - c)); });
        }
        cell.lhs = std::pow(ey, p);
        cell.rhs_moment = ex;
    }
    cell.rhs_factor = rhs_factor;
    cell.rhs = cell.rhs_moment * rhs_factor;
    cell.holds = cell.lhs <= cell.rhs * (1.0 + 1e-12);
    return cell;
}

}  // namespace

HarnackReport verify_harnack(const SdeProblem& problem, const Vector& x, const Vector& y, double T,
                             double p, const TestFunction& F, const EnsembleSpec& spec) {
    if (!(p > 1.0)) throw std::invalid_argument("verify_harnack: need p > 1");
    const auto& space = problem.space();
    const double alpha = problem.alpha();
    const double sigma = problem.sigma;
    const double gamma = problem.drift->gamma();

    HarnackReport rep;
    rep.p = p;
    rep.T = T;
    rep.sigma = sigma;
    rep.distance = space.norm_h(x - y);
    rep.constant = gamma == 0.0
                       ? harnack_constant(T, sigma, alpha, problem.drift->delta(), problem.xi)
                       : harnack_constant_quadrature(T, sigma, alpha, problem.drift->delta(),
                                                     problem.xi, gamma);
    rep.f_id = F.id();
    const double kappa = harnack_distance_exponent(alpha, sigma);
    rep.rhs_factor = rep.distance == 0.0
                         ? 1.0
                         : std::exp(p / (p - 1.0) * rep.constant * std::pow(rep.distance, kappa));

    const Observable f = F.bind(space);
    auto evaluate = [&](const std::vector<Vector>& states, std::vector<double>& fv,
                        std::vector<double>& fpv) {
        fv.reserve(states.size());
        fpv.reserve(states.size());
        for (const auto& s : states) {
            const double v = f(s);
            fv.push_back(v);
            fpv.push_back(std::pow(v, p));
        }
    };

    std::vector<double> fy;
    std::vector<double> fpy;
    std::vector<double> fx;
    std::vector<double> fpx;
    EnsembleSpec y_spec = spec;
    y_spec.stream = Stream::Paths;
    evaluate(final_states(problem, y, T, y_spec), fy, fpy);
    if (rep.distance == 0.0) {
        // One ensemble for both sides: the inequality is Jensen's for the empirical law.
        fx = fy;
        fpx = fpy;
    } else {
        EnsembleSpec x_spec = spec;
        x_spec.stream = Stream::PathsAlt;
        evaluate(final_states(problem, x, T, x_spec), fx, fpx);
    }
    rep.mean_f_y = mean_and_se(fy);
    rep.mean_fp_x = mean_and_se(fpx);
    rep.lhs = std::pow(rep.mean_f_y.mean, p);
    rep.lhs_se = p * std::pow(rep.mean_f_y.mean, p - 1.0) * rep.mean_f_y.se;
    rep.rhs = rep.mean_fp_x.mean * rep.rhs_factor;
    rep.rhs_se = rep.mean_fp_x.se * rep.rhs_factor;
    if (rep.distance == 0.0) {
        rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    } else {
        rep.pass = rep.lhs <= rep.rhs + 3.0 * std::hypot(rep.lhs_se, rep.rhs_se);
    }
    auto wide = [](double se, double value) { return 2.0 * 1.96 * se > 0.2 * std::abs(value); };
    rep.power_warning = wide(rep.lhs_se, rep.lhs) || (std::isfinite(rep.rhs) && wide(rep.rhs_se, rep.rhs));

    rep.exact = exact_linear_cell(problem, x, y, T, p, F, rep.rhs_factor);
    if (rep.exact && !rep.exact->holds) rep.pass = false;
    return rep;
}

}  // namespace monospde
