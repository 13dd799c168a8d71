#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace monospde {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

/// Sample mean and standard error (i.i.d. samples), reduced in index order.
Estimate mean_and_se(std::span<const double> xs);

/// Standard error from non-overlapping batch means of a correlated series.
Estimate batch_mean_estimate(std::span<const double> series, std::size_t batches);

/// Mean of exp(v) over the samples, computed in log space. Returns log of the
/// mean together with the standard error of the mean itself scaled by exp(-log_mean),
/// i.e. the relative standard error.
struct LogMeanExp {
    double log_mean = -std::numeric_limits<double>::infinity();
    double rel_se = 0.0;
};
LogMeanExp log_mean_exp(std::span<const double> values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace monospde
