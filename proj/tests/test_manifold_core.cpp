#include "doctest.h"

#include <cmath>

#include "geotrack/bounds.hpp"
#include "geotrack/euclidean.hpp"
#include "test_support.hpp"

using namespace geotrack;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("euclidean distance, exp, log") {
    const EuclideanManifold m(2);
    const ManifoldPoint o = m.point(vec2(0.0, 0.0));
    const ManifoldPoint p = m.point(vec2(3.0, 4.0));
    CHECK(m.distance(o, p) == doctest::Approx(5.0));
    CHECK(m.distance(p, p) == 0.0);

    const EuclideanManifold m3(3);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    Eigen::VectorXd shifted = ones;
    shifted[0] += 0.25;
    CHECK(m3.distance(m3.point(ones), m3.point(shifted)) == doctest::Approx(0.25));

    const ManifoldPoint x = m.point(vec2(1.0, 2.0));
    const ManifoldPoint moved = m.exp(x, m.tangent(x, vec2(0.0, -2.0)));
    CHECK(moved.coords.isApprox(vec2(1.0, 0.0)));
    CHECK(m.exp(x, m.tangent(x, vec2(0.0, 0.0))).coords.isApprox(x.coords));

    CHECK(m.log(o, p).coords.isApprox(vec2(3.0, 4.0)));
    CHECK(m.log(x, x).coords.norm() == 0.0);
    // inverse pair
    CHECK(m.exp(x, m.log(x, p)).coords.isApprox(p.coords));

    const EuclideanManifold m1(1);
    Eigen::VectorXd two(1), minus3(1);
    two << 2.0;
    minus3 << -3.0;
    const ManifoldPoint end = m1.exp(m1.point(two), m1.tangent(m1.point(two), minus3));
    CHECK(end.coords[0] == doctest::Approx(-1.0));

    CHECK_THROWS_AS(make_euclidean(0), ContractViolation);
}

TEST_CASE("euclidean transport and metric") {
    const EuclideanManifold m(3);
    RandomStream rng(7);
    const ManifoldPoint x = testing::random_point_near(m, m.point(Eigen::VectorXd::Zero(3)), rng, 1.0);
    const ManifoldPoint y = testing::random_point_near(m, x, rng, 2.0);
    const TangentVector u = m.sample_tangent_gaussian(x, rng);
    const TangentVector v = m.sample_tangent_gaussian(x, rng);

    CHECK(m.transport(x, y, u).coords.isApprox(u.coords));   // flat space
    CHECK(m.transport(x, x, u).coords.isApprox(u.coords));
    CHECK(m.inner(y, m.transport(x, y, u), m.transport(x, y, v))
          == doctest::Approx(m.inner(x, u, v)).epsilon(1e-12));

    CHECK(m.inner(x, u, v) == doctest::Approx(u.coords.dot(v.coords)));
    CHECK(m.inner(x, u, v) == doctest::Approx(m.inner(x, v, u)));
    CHECK(m.inner(x, u, u) > 0.0);
}

TEST_CASE("dimension and base mismatches are contract violations") {
    const EuclideanManifold m2(2);
    const EuclideanManifold m3(3);
    const ManifoldPoint a = m2.point(vec2(1.0, 0.0));
    const ManifoldPoint b = m3.point(Eigen::VectorXd::Zero(3));
    CHECK_THROWS_AS(m2.distance(a, b), ContractViolation);

    const ManifoldPoint c = m2.point(vec2(5.0, 5.0));
    const TangentVector at_a = m2.tangent(a, vec2(1.0, 1.0));
    CHECK_THROWS_AS(m2.inner(c, at_a, at_a), ContractViolation);
    CHECK_THROWS_AS(m2.exp(c, at_a), ContractViolation);
}

TEST_CASE("tangent gaussian sampling moments (euclidean)") {
    const int d = 6;
    const EuclideanManifold m(d);
    const ManifoldPoint x = m.point(Eigen::VectorXd::Zero(d));
    RandomStream rng(123);
    const int n = 100000;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const TangentVector u = m.sample_tangent_gaussian(x, rng);
        mean += u.coords;
        sq += u.coords.squaredNorm();
    }
    mean /= n;
    sq /= n;
    const double band = 4.0 * std::sqrt(static_cast<double>(d) / n);
    for (int j = 0; j < d; ++j) CHECK(std::abs(mean[j]) <= band);
    CHECK(sq == doctest::Approx(static_cast<double>(d)).epsilon(0.05));
}

TEST_CASE("geodesic ball projection") {
    const EuclideanManifold m(2);
    const GeodesicBall ball{m.point(vec2(0.0, 0.0)), 1.0};

    SUBCASE("identity inside") {
        const ManifoldPoint inside = m.point(vec2(0.3, -0.2));
        CHECK(project_ball(m, ball, inside).coords.isApprox(inside.coords));
    }
    SUBCASE("radial clip outside") {
        const ManifoldPoint outside = m.point(vec2(2.0, 0.0));
        CHECK(project_ball(m, ball, outside).coords.isApprox(vec2(1.0, 0.0)));
    }
    SUBCASE("nonexpansive and idempotent against the closed radial form") {
        RandomStream rng(11);
        for (int i = 0; i < 1000; ++i) {
            const ManifoldPoint x = m.point(vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)));
            const ManifoldPoint y = m.point(vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)));
            const ManifoldPoint px = project_ball(m, ball, x);
            const ManifoldPoint py = project_ball(m, ball, y);
            CHECK(m.distance(px, py) <= m.distance(x, y) + 1e-8);
            // closed-form radial projection as the oracle
            const double nx = x.coords.norm();
            const Eigen::VectorXd radial = nx <= 1.0 ? x.coords : (x.coords / nx);
            CHECK((px.coords - radial).norm() <= 1e-12);
            CHECK(project_ball(m, ball, px).coords.isApprox(px.coords));
        }
    }
    SUBCASE("nonpositive radius rejected") {
        CHECK_THROWS_AS(project_ball(m, GeodesicBall{ball.center, 0.0}, ball.center),
                        ContractViolation);
    }
}

TEST_CASE("law of cosines is an equality on flat space") {
    const EuclideanManifold m(3);
    RandomStream rng(5);
    const ManifoldPoint origin = m.point(Eigen::VectorXd::Zero(3));
    for (int i = 0; i < 300; ++i) {
        const ManifoldPoint x = testing::random_point_near(m, origin, rng, rng.uniform(0.1, 2.0));
        const ManifoldPoint y = testing::random_point_near(m, x, rng, rng.uniform(0.1, 2.0));
        const ManifoldPoint z = testing::random_point_near(m, x, rng, rng.uniform(0.1, 2.0));
        const double a = m.distance(y, z);
        const double b = m.distance(x, y);
        const double c = m.distance(x, z);
        const double cos_a = m.inner(x, m.log(x, y), m.log(x, z)) / (b * c);
        // zeta(0, c) = 1: equality up to rounding
        CHECK(a * a == doctest::Approx(zeta(0.0, c) * b * b + c * c - 2.0 * b * c * cos_a)
                           .epsilon(1e-9));
    }
}

TEST_CASE("random stream determinism and substream independence") {
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

    // substreams depend on (seed, index), not on how much the parent was consumed
    RandomStream parent1(7), parent2(7);
    for (int i = 0; i < 17; ++i) parent1.normal();
    RandomStream s1 = parent1.substream(3);
    RandomStream s2 = parent2.substream(3);
    for (int i = 0; i < 50; ++i) CHECK(s1.normal() == s2.normal());

    // different indices decorrelate
    RandomStream t1 = parent2.substream(4);
    bool any_different = false;
    RandomStream s3 = parent2.substream(3);
    for (int i = 0; i < 10; ++i) any_different |= (s3.normal() != t1.normal());
    CHECK(any_different);
}
