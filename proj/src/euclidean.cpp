#include "geotrack/euclidean.hpp"

namespace geotrack {

EuclideanManifold::EuclideanManifold(int n)
    : Manifold(ManifoldDescriptor{n, n, 0.0}) {
    require(n >= 1, "euclidean: dimension must be >= 1");
}

ManifoldPoint EuclideanManifold::point(const Eigen::VectorXd& coords) const {
    ManifoldPoint p{coords};
    check_point(p, "point");
    return p;
}

TangentVector EuclideanManifold::tangent(const ManifoldPoint& base,
                                         const Eigen::VectorXd& coords) const {
    check_point(base, "tangent");
    require(coords.size() == ambient_dim(), "tangent: dimension mismatch");
    return {base, coords};
}

bool EuclideanManifold::contains(const ManifoldPoint& x) const {
    return x.coords.size() == ambient_dim();
}

bool EuclideanManifold::is_tangent(const TangentVector& v) const {
    return v.coords.size() == ambient_dim() && contains(v.base);
}

double EuclideanManifold::do_distance(const ManifoldPoint& x, const ManifoldPoint& y) const {
    return (y.coords - x.coords).norm();
}

ManifoldPoint EuclideanManifold::do_exp(const ManifoldPoint& x, const TangentVector& v) const {
    return {x.coords + v.coords};
}

TangentVector EuclideanManifold::do_log(const ManifoldPoint& x, const ManifoldPoint& y) const {
    return {x, y.coords - x.coords};
}

TangentVector EuclideanManifold::do_transport(const ManifoldPoint&, const ManifoldPoint& y,
                                              const TangentVector& v) const {
    return {y, v.coords};
}

double EuclideanManifold::do_inner(const ManifoldPoint&, const TangentVector& u,
                                   const TangentVector& v) const {
    return u.coords.dot(v.coords);
}

Eigen::VectorXd EuclideanManifold::do_project_ambient(const ManifoldPoint&,
                                                      const Eigen::VectorXd& u0) const {
    return u0;
}

EuclideanManifold make_euclidean(int n) { return EuclideanManifold(n); }

} // namespace geotrack
