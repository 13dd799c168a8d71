#pragma once

#include <Eigen/Core>
#include <vector>

namespace monospde {

/// Symmetric positive definite banded matrix stored by its lower band,
/// factored in place by Cholesky. Used for the Newton systems of the implicit step.
class BandedSpd {
public:
    BandedSpd() = default;
    BandedSpd(int n, int bandwidth);

    int size() const noexcept { return n_; }
    int bandwidth() const noexcept { return bw_; }

    void set_zero();
    /// Entry (i, j) with 0 <= i - j <= bandwidth.
    double& lower(int i, int j) { return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)]; }
    double lower(int i, int j) const { return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)]; }

    /// Returns false if the matrix is not numerically positive definite.
    bool factorize();
    /// Solves A x = b in place; requires a successful factorize().
    void solve_in_place(Eigen::VectorXd& b) const;

    Eigen::MatrixXd to_dense() const;

private:
    int n_ = 0;
    int bw_ = 0;
    std::vector<double> data_;
};

}  // namespace monospde
