#include "monospde/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monospde {

BandedSpd::BandedSpd(int n, int bandwidth)
    : n_(n), bw_(bandwidth), data_(static_cast<std::size_t>(n) * (bandwidth + 1), 0.0) {
    if (n < 1 || bandwidth < 0) throw std::invalid_argument("BandedSpd: bad shape");
}

void BandedSpd::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

bool BandedSpd::factorize() {
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - bw_);
        for (int j = j0; j <= i; ++j) {
            double s = lower(i, j);
            for (int k = std::max(j0, j - bw_); k < j; ++k) s -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (!(s > 0.0)) return false;
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }
    return true;
}

void BandedSpd::solve_in_place(Eigen::VectorXd& b) const {
    for (int i = 0; i < n_; ++i) {
        double s = b(i);
        for (int k = std::max(0, i - bw_); k < i; ++k) s -= lower(i, k) * b(k);
        b(i) = s / lower(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = b(i);
        for (int k = i + 1; k <= std::min(n_ - 1, i + bw_); ++k) s -= lower(k, i) * b(k);
        b(i) = s / lower(i, i);
    }
}

Eigen::MatrixXd BandedSpd::to_dense() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - bw_); j <= i; ++j) a(i, j) = a(j, i) = lower(i, j);
    return a;
}

}  // namespace monospde
