#include "monospde/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace monospde {

Estimate mean_and_se(std::span<const double> xs) {
    Estimate e;
    e.count = xs.size();
    if (xs.empty()) return e;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    e.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return e;
    CompensatedSum ss;
    for (double x : xs) ss.add((x - e.mean) * (x - e.mean));
    const double var = ss.value() / static_cast<double>(xs.size() - 1);
    e.se = std::sqrt(var / static_cast<double>(xs.size()));
    return e;
}

Estimate batch_mean_estimate(std::span<const double> series, std::size_t batches) {
    if (batches < 2 || series.size() < 2 * batches) return mean_and_se(series);
    const std::size_t len = series.size() / batches;
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        CompensatedSum s;
        for (std::size_t i = 0; i < len; ++i) s.add(series[b * len + i]);
        means[b] = s.value() / static_cast<double>(len);
    }
    Estimate e = mean_and_se(means);
    // Use all samples for the point estimate.
    CompensatedSum all;
    for (double x : series) all.add(x);
    e.mean = all.value() / static_cast<double>(series.size());
    e.count = series.size();
    return e;
}

LogMeanExp log_mean_exp(std::span<const double> values) {
    LogMeanExp out;
    if (values.empty()) return out;
    const double vmax = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(vmax)) {
        out.log_mean = vmax;
        return out;
    }
    CompensatedSum s;
    for (double v : values) s.add(std::exp(v - vmax));
    const double n = static_cast<double>(values.size());
    const double mean_scaled = s.value() / n;
    out.log_mean = vmax + std::log(mean_scaled);
    if (values.size() > 1) {
        CompensatedSum ss;
        for (double v : values) {
            const double d = std::exp(v - vmax) - mean_scaled;
            ss.add(d * d);
        }
        const double var = ss.value() / (n - 1.0);
        out.rel_se = std::sqrt(var / n) / mean_scaled;
    }
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    LinearFit f;
    f.points = x.size();
    if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    if (x.size() > 2) f.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
    return f;
}

}  // namespace monospde
