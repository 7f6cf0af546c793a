#pragma once

#include "geotrack/manifold.hpp"

namespace geotrack {

/// Flat R^n: kappa = 0, exp(x, v) = x + v, log(x, y) = y - x, transport is the
/// identity on coordinates and the metric is the dot product. Serves as the
/// analytically exact test bed for every oracle, optimizer and bound property.
class EuclideanManifold final : public Manifold {
public:
    explicit EuclideanManifold(int n);

    ManifoldPoint point(const Eigen::VectorXd& coords) const;
    TangentVector tangent(const ManifoldPoint& base, const Eigen::VectorXd& coords) const;

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
};

EuclideanManifold make_euclidean(int n);

} // namespace geotrack
