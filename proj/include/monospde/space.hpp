#pragma once

#include <Eigen/Core>
#include <memory>

namespace monospde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class NoiseModel;

/// Which norm to evaluate on a grid function.
///
/// H is the mesh-weighted discrete L2 norm, V(p, m) the discrete W0^{m,p}
/// seminorm (sum |D^m u|^p h)^{1/p}, and B the intrinsic noise norm |B^{-1} u|_U.
struct NormKind {
    enum class Tag { H, V, B };

    Tag tag = Tag::H;
    double p = 2.0;
    int m = 1;

    static NormKind h() { return {Tag::H, 2.0, 1}; }
    static NormKind v(double p, int m = 1) { return {Tag::V, p, m}; }
    static NormKind b() { return {Tag::B, 2.0, 1}; }
};

/// Finite-difference stand-in for V ⊂ H ⊂ V* on (0, 1) with Dirichlet boundary.
///
/// Grid functions live on the n interior nodes x_j = (j + 1) h, h = 1 / (n + 1).
/// The forward difference D maps n nodes to n + 1 edges with zero padding, and
/// D^m is D composed m times (n + m entries). Inner products on every level carry
/// the mesh weight h, so div = -D^T is exactly the negative adjoint of grad = D.
/// Immutable after construction.
class DiscreteSpace {
public:
    DiscreteSpace(int n, int order = 1);

    int size() const noexcept { return n_; }
    double mesh() const noexcept { return h_; }
    int order() const noexcept { return order_; }

    Vector grad(const Vector& u) const { return diff(u, 1); }
    Vector div(const Vector& w) const { return -diff_adjoint(w, 1); }
    Vector laplacian(const Vector& u) const { return -diff_adjoint(diff(u, 1), 1); }

    /// D^m u, length n + m.
    Vector diff(const Vector& u, int m) const;
    /// (D^m)^T w for w of length n + m (Euclidean transpose; equals the
    /// h-weighted adjoint because both levels carry the same weight).
    Vector diff_adjoint(const Vector& w, int m) const;

    /// Ascending Dirichlet eigenvalues (4/h^2) sin^2(k pi h / 2), k = 1..n.
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    /// Column k-1 holds e_k, orthonormal in the H inner product.
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    double eigenvalue(int k) const { return eigenvalues_(k); }

    /// Coordinates <u, e_k>_H.
    Vector to_modes(const Vector& u) const;
    Vector from_modes(const Vector& coords) const;

    double inner(const Vector& u, const Vector& v) const { return h_ * u.dot(v); }
    double norm_h(const Vector& u) const;
    /// (sum_i |(D^m u)_i|^p h)^{1/p}.
    double norm_v(const Vector& u, double p, int m) const;
    /// sum_i |(D^m u)_i|^p h, i.e. norm_v^p without the root.
    double power_sum_v(const Vector& u, double p, int m) const;

    /// Gram matrix of D^m in the sense |D^m u|_h^2 = h u^T G u.
    Matrix gram(int m) const;

private:
    int n_;
    int order_;
    double h_;
    Vector eigenvalues_;
    Matrix eigenvectors_;
};

using SpacePtr = std::shared_ptr<const DiscreteSpace>;

SpacePtr build_space(int n, int m = 1);

/// Evaluates the requested norm; the B norm needs the noise model.
double norm(const DiscreteSpace& space, NormKind kind, const Vector& u,
            const NoiseModel* noise = nullptr);

/// Largest c0 with |u|_V^2 >= c0 |u|_H^2 for V = V(2, m); 1 for the H norm.
double embedding_constant(const DiscreteSpace& space, NormKind kind);

/// Constant kappa with |u|_{V(p,m)}^p >= kappa |u|_H^p for p >= 2, obtained from
/// Hölder over the n + m difference entries and the p = 2 embedding constant.
double power_embedding_constant(const DiscreteSpace& space, double p, int m);

}  // namespace monospde
