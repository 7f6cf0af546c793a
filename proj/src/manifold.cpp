#include "geotrack/manifold.hpp"

#include <cmath>

namespace geotrack {

Manifold::Manifold(ManifoldDescriptor desc) : desc_(desc) {
    require(desc_.intrinsic_dim >= 1, "manifold: intrinsic_dim must be >= 1");
    require(desc_.intrinsic_dim <= desc_.ambient_dim,
            "manifold: intrinsic_dim must not exceed ambient_dim");
    require(desc_.curvature_lower_bound <= 0.0,
            "manifold: curvature lower bound must be <= 0 (Hadamard)");
}

void Manifold::check_point(const ManifoldPoint& x, const char* who) const {
    if (x.coords.size() != desc_.ambient_dim)
        throw ContractViolation(std::string(who) + ": point dimension mismatch");
}

void Manifold::check_based_at(const TangentVector& v, const ManifoldPoint& x,
                              const char* who) const {
    check_point(v.base, who);
    if (v.coords.size() != desc_.ambient_dim)
        throw ContractViolation(std::string(who) + ": tangent dimension mismatch");
    const double scale = 1.0 + x.coords.norm();
    if ((v.base.coords - x.coords).norm() > 1e-9 * scale)
        throw ContractViolation(std::string(who) + ": tangent vector not based at the given point");
}

double Manifold::distance(const ManifoldPoint& x, const ManifoldPoint& y) const {
    check_point(x, "distance");
    check_point(y, "distance");
    return do_distance(x, y);
}

ManifoldPoint Manifold::exp(const ManifoldPoint& x, const TangentVector& v) const {
    check_point(x, "exp");
    check_based_at(v, x, "exp");
    return do_exp(x, v);
}

TangentVector Manifold::log(const ManifoldPoint& x, const ManifoldPoint& y) const {
    check_point(x, "log");
    check_point(y, "log");
    return do_log(x, y);
}

TangentVector Manifold::transport(const ManifoldPoint& x, const ManifoldPoint& y,
                                  const TangentVector& v) const {
    check_point(y, "transport");
    check_based_at(v, x, "transport");
    return do_transport(x, y, v);
}

double Manifold::inner(const ManifoldPoint& x, const TangentVector& u,
                       const TangentVector& v) const {
    check_based_at(u, x, "inner");
    check_based_at(v, x, "inner");
    return do_inner(x, u, v);
}

double Manifold::norm(const ManifoldPoint& x, const TangentVector& v) const {
    return std::sqrt(std::max(0.0, inner(x, v, v)));
}

TangentVector Manifold::sample_tangent_gaussian(const ManifoldPoint& x, RandomStream& rng) const {
    check_point(x, "sample_tangent_gaussian");
    Eigen::VectorXd u0(desc_.ambient_dim);
    for (int i = 0; i < desc_.ambient_dim; ++i) u0[i] = rng.normal();
    return {x, do_project_ambient(x, u0)};
}

Eigen::VectorXd Manifold::project_ambient(const ManifoldPoint& x, const Eigen::VectorXd& u0) const {
    check_point(x, "project_ambient");
    if (u0.size() != desc_.ambient_dim)
        throw ContractViolation("project_ambient: vector dimension mismatch");
    return do_project_ambient(x, u0);
}

std::vector<TangentVector> Manifold::tangent_basis(const ManifoldPoint& x) const {
    check_point(x, "tangent_basis");
    return do_tangent_basis(x);
}

// Generic fallback: project the ambient basis onto T_x M and orthonormalize it
// in the manifold metric (modified Gram-Schmidt with rank detection).
std::vector<TangentVector> Manifold::do_tangent_basis(const ManifoldPoint& x) const {
    std::vector<TangentVector> basis;
    basis.reserve(desc_.intrinsic_dim);
    for (int i = 0; i < desc_.ambient_dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(desc_.ambient_dim);
        e[i] = 1.0;
        TangentVector candidate{x, do_project_ambient(x, e)};
        for (const auto& b : basis)
            candidate.coords -= do_inner(x, candidate, b) * b.coords;
        const double n = std::sqrt(std::max(0.0, do_inner(x, candidate, candidate)));
        if (n > 1e-8) {
            candidate.coords /= n;
            basis.push_back(std::move(candidate));
        }
        if (static_cast<int>(basis.size()) == desc_.intrinsic_dim) break;
    }
    if (static_cast<int>(basis.size()) != desc_.intrinsic_dim)
        throw DomainError("tangent_basis: failed to span the tangent space");
    return basis;
}

ManifoldPoint project_ball(const Manifold& m, const GeodesicBall& ball, const ManifoldPoint& x) {
    require(ball.radius > 0.0, "project_ball: radius must be positive");
    const double dist = m.distance(ball.center, x);
    if (dist <= ball.radius) return x;
    TangentVector toward = m.log(ball.center, x);
    return m.exp(ball.center, scaled(toward, ball.radius / dist));
}

bool ball_contains(const Manifold& m, const GeodesicBall& ball, const ManifoldPoint& x,
                   double slack) {
    return m.distance(ball.center, x) <= ball.radius * (1.0 + slack) + slack;
}

} // namespace geotrack
