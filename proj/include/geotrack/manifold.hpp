#pragma once

#include <Eigen/Dense>

#include <vector>

#include "geotrack/errors.hpp"
#include "geotrack/random.hpp"

namespace geotrack {

/// Static description of a Hadamard manifold embedded in R^n.
struct ManifoldDescriptor {
    int ambient_dim = 0;                  ///< n, length of coordinate vectors
    int intrinsic_dim = 0;                ///< d, manifold dimension
    double curvature_lower_bound = 0.0;   ///< kappa <= 0
};

/// Point on a manifold, stored in ambient embedding coordinates.
struct ManifoldPoint {
    Eigen::VectorXd coords;
};

/// Tangent vector at `base`, stored in ambient coordinates.
struct TangentVector {
    ManifoldPoint base;
    Eigen::VectorXd coords;
};

inline TangentVector scaled(const TangentVector& v, double s) {
    return {v.base, v.coords * s};
}

/// Hadamard manifold interface: geodesic distance, exponential/logarithm maps,
/// parallel transport, the Riemannian metric, and tangent Gaussian sampling via
/// ambient orthogonal projection (u = P u0 with u0 ~ N(0, I_n)).
///
/// All operations are pure and safe for concurrent use.
class Manifold {
public:
    virtual ~Manifold() = default;

    const ManifoldDescriptor& descriptor() const { return desc_; }
    int ambient_dim() const { return desc_.ambient_dim; }
    int intrinsic_dim() const { return desc_.intrinsic_dim; }
    double curvature_lower_bound() const { return desc_.curvature_lower_bound; }

    /// Geodesic distance; symmetric, zero iff x == y, equals |log(x, y)|.
    double distance(const ManifoldPoint& x, const ManifoldPoint& y) const;

    /// Point reached along the geodesic from x with initial velocity v.
    ManifoldPoint exp(const ManifoldPoint& x, const TangentVector& v) const;

    /// Inverse of exp: tangent vector at x pointing to y (globally defined).
    TangentVector log(const ManifoldPoint& x, const ManifoldPoint& y) const;

    /// Parallel transport of v from T_x M to T_y M along the connecting geodesic.
    TangentVector transport(const ManifoldPoint& x, const ManifoldPoint& y,
                            const TangentVector& v) const;

    /// Riemannian metric at x.
    double inner(const ManifoldPoint& x, const TangentVector& u,
                 const TangentVector& v) const;

    double norm(const ManifoldPoint& x, const TangentVector& v) const;

    /// u = P u0 with u0 a standard normal ambient vector and P the orthogonal
    /// projection onto T_x M in ambient coordinates. E|u|^2 = d in the ambient norm.
    TangentVector sample_tangent_gaussian(const ManifoldPoint& x, RandomStream& rng) const;

    /// Ambient orthogonal projection onto T_x M.
    Eigen::VectorXd project_ambient(const ManifoldPoint& x, const Eigen::VectorXd& u0) const;

    /// Basis of T_x M, orthonormal in the Riemannian metric at x.
    std::vector<TangentVector> tangent_basis(const ManifoldPoint& x) const;

    /// Membership predicate with the manifold's own tolerance policy.
    virtual bool contains(const ManifoldPoint& x) const = 0;

    /// Tangency predicate (the vector lies in T_base M).
    virtual bool is_tangent(const TangentVector& v) const = 0;

protected:
    explicit Manifold(ManifoldDescriptor desc);
    Manifold(const Manifold&) = default;
    Manifold& operator=(const Manifold&) = default;

    virtual double do_distance(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;
    virtual ManifoldPoint do_exp(const ManifoldPoint& x, const TangentVector& v) const = 0;
    virtual TangentVector do_log(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;
    virtual TangentVector do_transport(const ManifoldPoint& x, const ManifoldPoint& y,
                                       const TangentVector& v) const = 0;
    virtual double do_inner(const ManifoldPoint& x, const TangentVector& u,
                            const TangentVector& v) const = 0;
    virtual Eigen::VectorXd do_project_ambient(const ManifoldPoint& x,
                                               const Eigen::VectorXd& u0) const = 0;
    virtual std::vector<TangentVector> do_tangent_basis(const ManifoldPoint& x) const;

    void check_point(const ManifoldPoint& x, const char* who) const;
    void check_based_at(const TangentVector& v, const ManifoldPoint& x, const char* who) const;

private:
    ManifoldDescriptor desc_;
};

/// Closed geodesic ball {y : dist(center, y) <= radius}; convex on a Hadamard
/// manifold, so its metric projection is single-valued and nonexpansive. The
/// diameter 2*radius plays the role of the domain bound R.
struct GeodesicBall {
    ManifoldPoint center;
    double radius = 0.0;
};

/// Metric projection onto a geodesic ball: identity inside, otherwise the point
/// at distance `radius` from the center along the geodesic toward x.
ManifoldPoint project_ball(const Manifold& m, const GeodesicBall& ball, const ManifoldPoint& x);

bool ball_contains(const Manifold& m, const GeodesicBall& ball, const ManifoldPoint& x,
                   double slack = 1e-9);

} // namespace geotrack
