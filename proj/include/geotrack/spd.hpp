#pragma once

#include "geotrack/manifold.hpp"

namespace geotrack {

/// Symmetric eigendecomposition X = Q diag(lambda) Q^T with eigenvalues in
/// descending order. Single primitive behind all SPD matrix functions.
struct SymEig {
    Eigen::VectorXd eigenvalues;   ///< descending
    Eigen::MatrixXd eigenvectors;  ///< orthogonal, columns match eigenvalues
};

SymEig sym_eig(const Eigen::MatrixXd& x);

/// Matrix functions of SPD (or symmetric, for expm_sym) matrices via SymEig.
/// Eigenvalues at or below 1e-12 * lambda_max raise DomainError rather than
/// being clipped, so drift off the manifold surfaces instead of hiding.
Eigen::MatrixXd sqrtm_spd(const Eigen::MatrixXd& x);
Eigen::MatrixXd inv_sqrtm_spd(const Eigen::MatrixXd& x);
Eigen::MatrixXd logm_spd(const Eigen::MatrixXd& x);
Eigen::MatrixXd expm_sym(const Eigen::MatrixXd& s);

/// SPD(m) with the affine-invariant metric <M,N>_X = trace(X^-1 M X^-1 N).
///
/// dist(X,Y)  = |log(X^-1/2 Y X^-1/2)|_F
/// Exp_X(M)   = X^1/2 exp(X^-1/2 M X^-1/2) X^1/2
/// Log_X(Y)   = X^1/2 log(X^-1/2 Y X^-1/2) X^1/2
/// transport  = E V E^T with E = X^1/2 (X^-1/2 Y X^-1/2)^1/2 X^-1/2
///
/// Points and tangents are full m x m matrices flattened row-major to length
/// m^2 ambient coordinates; tangent sampling is the ambient projection
/// u = (G + G^T)/2 of an i.i.d. Gaussian matrix. Intrinsic dimension is
/// d = m(m+1)/2 and the default curvature lower bound is -1/2.
class SpdManifold final : public Manifold {
public:
    explicit SpdManifold(int m, double kappa = -0.5);

    int matrix_size() const { return m_; }

    Eigen::MatrixXd to_matrix(const Eigen::VectorXd& coords) const;
    Eigen::VectorXd to_coords(const Eigen::MatrixXd& x) const;

    /// Wraps an SPD matrix as a point (symmetrizes, validates membership).
    ManifoldPoint point(const Eigen::MatrixXd& x) const;
    /// Wraps a symmetric matrix as a tangent vector at `base` (symmetrizes).
    TangentVector tangent(const ManifoldPoint& base, const Eigen::MatrixXd& v) const;

    bool contains(const ManifoldPoint& x) const override;
    bool is_tangent(const TangentVector& v) const override;

protected:
    double do_distance(const ManifoldPoint& x, const ManifoldPoint& y) const override;
    ManifoldPoint do_exp(const ManifoldPoint& x, const TangentVector& v) const override;
    TangentVector do_log(const ManifoldPoint& x, const ManifoldPoint& y) const override;
    TangentVector do_transport(const ManifoldPoint& x, const ManifoldPoint& y,
                               const TangentVector& v) const override;
    double do_inner(const ManifoldPoint& x, const TangentVector& u,
                    const TangentVector& v) const override;
    Eigen::VectorXd do_project_ambient(const ManifoldPoint& x,
                                       const Eigen::VectorXd& u0) const override;
    std::vector<TangentVector> do_tangent_basis(const ManifoldPoint& x) const override;

private:
    int m_;
};

/// Riemannian gradient of the Karcher cost f(X) = (1/2N) sum_i dist(X, A_i)^2,
/// namely -(1/N) sum_i Log_X(A_i). Zero exactly at the Karcher mean.
TangentVector karcher_grad(const SpdManifold& m, const ManifoldPoint& x,
                           const std::vector<Eigen::MatrixXd>& matrices);

} // namespace geotrack
