#include "geotrack/spd.hpp"

#include <cmath>

namespace geotrack {

namespace {

constexpr double kEigFloor = 1e-12;   // relative to lambda_max; below is a domain error
constexpr double kSymTol = 1e-10;     // absolute symmetry tolerance (membership)

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) {
    return 0.5 * (a + a.transpose());
}

void check_positive_spectrum(const Eigen::VectorXd& descending, const char* who) {
    const double lmax = descending[0];
    if (!(lmax > 0.0) || !(descending[descending.size() - 1] > kEigFloor * lmax))
        throw DomainError(std::string(who) + ": matrix is not positive definite "
                          "(eigenvalue at or below 1e-12 * lambda_max)");
}

// X^p for SPD X via one eigendecomposition; validates the spectrum.
Eigen::MatrixXd spd_power(const Eigen::MatrixXd& x, double p, const char* who) {
    const SymEig e = sym_eig(x);
    check_positive_spectrum(e.eigenvalues, who);
    Eigen::VectorXd powed = e.eigenvalues.array().pow(p);
    return symmetrize(e.eigenvectors * powed.asDiagonal() * e.eigenvectors.transpose());
}

} // namespace

SymEig sym_eig(const Eigen::MatrixXd& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrize(x));
    if (solver.info() != Eigen::Success)
        throw DomainError("sym_eig: eigendecomposition failed to converge");
    const auto n = x.rows();
    SymEig out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        out.eigenvectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    return out;
}

Eigen::MatrixXd sqrtm_spd(const Eigen::MatrixXd& x) { return spd_power(x, 0.5, "sqrtm_spd"); }

Eigen::MatrixXd inv_sqrtm_spd(const Eigen::MatrixXd& x) {
    return spd_power(x, -0.5, "inv_sqrtm_spd");
}

Eigen::MatrixXd logm_spd(const Eigen::MatrixXd& x) {
    const SymEig e = sym_eig(x);
    check_positive_spectrum(e.eigenvalues, "logm_spd");
    Eigen::VectorXd logged = e.eigenvalues.array().log();
    return symmetrize(e.eigenvectors * logged.asDiagonal() * e.eigenvectors.transpose());
}

Eigen::MatrixXd expm_sym(const Eigen::MatrixXd& s) {
    const SymEig e = sym_eig(s);
    Eigen::VectorXd exped = e.eigenvalues.array().exp();
    return symmetrize(e.eigenvectors * exped.asDiagonal() * e.eigenvectors.transpose());
}

SpdManifold::SpdManifold(int m, double kappa)
    : Manifold(ManifoldDescriptor{m * m, m * (m + 1) / 2, kappa}), m_(m) {
    require(m >= 1, "spd: matrix size must be >= 1");
}

Eigen::MatrixXd SpdManifold::to_matrix(const Eigen::VectorXd& coords) const {
    require(coords.size() == ambient_dim(), "spd: coordinate length mismatch");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(coords.data(), m_, m_);
}

Eigen::VectorXd SpdManifold::to_coords(const Eigen::MatrixXd& x) const {
    require(x.rows() == m_ && x.cols() == m_, "spd: matrix size mismatch");
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row = x;
    return Eigen::Map<const Eigen::VectorXd>(row.data(), m_ * m_);
}

ManifoldPoint SpdManifold::point(const Eigen::MatrixXd& x) const {
    ManifoldPoint p{to_coords(symmetrize(x))};
    if (!contains(p)) throw DomainError("spd: matrix is not symmetric positive definite");
    return p;
}

TangentVector SpdManifold::tangent(const ManifoldPoint& base, const Eigen::MatrixXd& v) const {
    check_point(base, "tangent");
    return {base, to_coords(symmetrize(v))};
}

bool SpdManifold::contains(const ManifoldPoint& x) const {
    if (x.coords.size() != ambient_dim()) return false;
    const Eigen::MatrixXd m = to_matrix(x.coords);
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol) return false;
    const SymEig e = sym_eig(m);
    const double lmax = e.eigenvalues[0];
    return lmax > 0.0 && e.eigenvalues[m_ - 1] > kEigFloor * lmax;
}

bool SpdManifold::is_tangent(const TangentVector& v) const {
    if (v.coords.size() != ambient_dim()) return false;
    const Eigen::MatrixXd m = to_matrix(v.coords);
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymTol && contains(v.base);
}

double SpdManifold::do_distance(const ManifoldPoint& x, const ManifoldPoint& y) const {
    const Eigen::MatrixXd w = inv_sqrtm_spd(to_matrix(x.coords));
    const Eigen::MatrixXd middle = symmetrize(w * to_matrix(y.coords) * w);
    const SymEig e = sym_eig(middle);
    check_positive_spectrum(e.eigenvalues, "spd_distance");
    return e.eigenvalues.array().log().matrix().norm();
}

ManifoldPoint SpdManifold::do_exp(const ManifoldPoint& x, const TangentVector& v) const {
    const Eigen::MatrixXd xm = to_matrix(x.coords);
    const Eigen::MatrixXd sq = sqrtm_spd(xm);
    const Eigen::MatrixXd w = inv_sqrtm_spd(xm);
    const Eigen::MatrixXd inner = expm_sym(symmetrize(w * to_matrix(v.coords) * w));
    return {to_coords(symmetrize(sq * inner * sq))};
}

TangentVector SpdManifold::do_log(const ManifoldPoint& x, const ManifoldPoint& y) const {
    const Eigen::MatrixXd xm = to_matrix(x.coords);
    const Eigen::MatrixXd sq = sqrtm_spd(xm);
    const Eigen::MatrixXd w = inv_sqrtm_spd(xm);
    const Eigen::MatrixXd inner = logm_spd(symmetrize(w * to_matrix(y.coords) * w));
    return {x, to_coords(symmetrize(sq * inner * sq))};
}

TangentVector SpdManifold::do_transport(const ManifoldPoint& x, const ManifoldPoint& y,
                                        const TangentVector& v) const {
    const Eigen::MatrixXd xm = to_matrix(x.coords);
    const Eigen::MatrixXd sq = sqrtm_spd(xm);
    const Eigen::MatrixXd w = inv_sqrtm_spd(xm);
    const Eigen::MatrixXd middle = sqrtm_spd(symmetrize(w * to_matrix(y.coords) * w));
    const Eigen::MatrixXd e = sq * middle * w;
    return {y, to_coords(symmetrize(e * to_matrix(v.coords) * e.transpose()))};
}

double SpdManifold::do_inner(const ManifoldPoint& x, const TangentVector& u,
                             const TangentVector& v) const {
    const Eigen::MatrixXd xm = to_matrix(x.coords);
    Eigen::LLT<Eigen::MatrixXd> llt(xm);
    if (llt.info() != Eigen::Success)
        throw DomainError("spd_inner: base point is not positive definite");
    const Eigen::MatrixXd xu = llt.solve(to_matrix(u.coords));
    const Eigen::MatrixXd xv = llt.solve(to_matrix(v.coords));
    return (xu * xv).trace();
}

Eigen::VectorXd SpdManifold::do_project_ambient(const ManifoldPoint&,
                                                const Eigen::VectorXd& u0) const {
    return to_coords(symmetrize(to_matrix(u0)));
}

// Analytic metric-orthonormal basis: images of the Frobenius-orthonormal
// symmetric basis under V -> X^1/2 V X^1/2.
std::vector<TangentVector> SpdManifold::do_tangent_basis(const ManifoldPoint& x) const {
    const Eigen::MatrixXd sq = sqrtm_spd(to_matrix(x.coords));
    std::vector<TangentVector> basis;
    basis.reserve(intrinsic_dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < m_; ++i) {
        for (int j = i; j < m_; ++j) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m_, m_);
            if (i == j) {
                e(i, i) = 1.0;
            } else {
                e(i, j) = inv_sqrt2;
                e(j, i) = inv_sqrt2;
            }
            basis.push_back({x, to_coords(symmetrize(sq * e * sq))});
        }
    }
    return basis;
}

TangentVector karcher_grad(const SpdManifold& m, const ManifoldPoint& x,
                           const std::vector<Eigen::MatrixXd>& matrices) {
    require(!matrices.empty(), "karcher_grad: need at least one matrix");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m.ambient_dim());
    for (const auto& a : matrices) sum += m.log(x, m.point(a)).coords;
    return {x, -sum / static_cast<double>(matrices.size())};
}

} // namespace geotrack
