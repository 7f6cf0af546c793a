#include "geotrack/oracle.hpp"

#include <cmath>

namespace geotrack {

OracleSample oracle_sample_with_direction(const Manifold& m, const TimeVaryingObjective& f,
                                          TimeIndex k, const ManifoldPoint& x, double eta,
                                          const TangentVector& u) {
    require(eta > 0.0, "oracle: eta must be positive");
    require(k.half_steps >= 0 && k.integer_time(), "oracle: k must be an even half-step");
    OracleSample s;
    s.direction = u;
    const double reach = eta * m.norm(x, u);
    s.capped = reach > kMaxGeodesicReach;
    s.eta = s.capped ? eta * (kMaxGeodesicReach / reach) : eta;
    // f_k at x strictly before f_{k+} at the probe point; the cost may change in between.
    s.point_eval_k = f(k, x);
    s.point_eval_kplus = f(k.next(), m.exp(x, scaled(u, s.eta)));
    s.value = {x, ((s.point_eval_kplus - s.point_eval_k) / s.eta) * u.coords};
    return s;
}

OracleSample estimate_gradient(const Manifold& m, const TimeVaryingObjective& f,
                               TimeIndex k, const ManifoldPoint& x, double eta,
                               RandomStream& rng) {
    require(eta > 0.0, "estimate_gradient: eta must be positive");
    const TangentVector u = m.sample_tangent_gaussian(x, rng);
    return oracle_sample_with_direction(m, f, k, x, eta, u);
}

double bias_bound(const ProblemConstants& c, double eta) {
    require(eta > 0.0, "bias_bound: eta must be positive");
    const double d = static_cast<double>(c.d);
    return 0.5 * c.L * eta * std::pow(d + 3.0, 1.5) + c.delta * std::sqrt(d) / eta;
}

double second_moment_bound(const ProblemConstants& c, double eta, double grad_norm) {
    require(eta > 0.0, "second_moment_bound: eta must be positive");
    require(grad_norm >= 0.0, "second_moment_bound: grad_norm must be >= 0");
    const double d = static_cast<double>(c.d);
    return 0.5 * c.L * c.L * eta * eta * std::pow(d + 6.0, 3)
         + 2.0 * c.L * c.delta * (d + 4.0) * (d + 4.0)
         + 2.0 * c.delta * c.delta * d / (eta * eta)
         + 2.0 * (d + 4.0) * grad_norm * grad_norm;
}

TangentVector finite_difference_gradient(const Manifold& m, const TimeVaryingObjective& f,
                                         TimeIndex t, const ManifoldPoint& x) {
    const double h = 1e-5 * (1.0 + x.coords.norm());
    const auto basis = m.tangent_basis(x);
    Eigen::VectorXd coords = Eigen::VectorXd::Zero(m.ambient_dim());
    for (const auto& b : basis) {
        const double fp = f(t, m.exp(x, scaled(b, h)));
        const double fm = f(t, m.exp(x, scaled(b, -h)));
        coords += ((fp - fm) / (2.0 * h)) * b.coords;
    }
    return {x, coords};
}

DiagnosticReport verify_oracle_bounds(const Manifold& m, const TimeVaryingObjective& f,
                                      TimeIndex k, const ManifoldPoint& x, double eta,
                                      std::size_t samples, RandomStream& rng,
                                      double understate_L) {
    if (samples < 1000)
        throw ContractViolation("verify_oracle_bounds: fewer than 1000 samples has no "
                                "statistical power");
    require(understate_L > 0.0, "verify_oracle_bounds: understatement factor must be positive");

    const TangentVector grad = f.has_gradient() ? f.gradient(k.next(), x)
                                                : finite_difference_gradient(m, f, k.next(), x);
    const double grad_norm = m.norm(x, grad);

    ProblemConstants declared = f.constants();
    declared.L /= understate_L;

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m.ambient_dim());
    double sum_sq = 0.0;     // sum of |g_i|^2
    double sum_sq2 = 0.0;    // sum of |g_i|^4
    for (std::size_t i = 0; i < samples; ++i) {
        const OracleSample s = estimate_gradient(m, f, k, x, eta, rng);
        sum += s.value.coords;
        const double sq = m.inner(x, s.value, s.value);
        sum_sq += sq;
        sum_sq2 += sq * sq;
    }
    const double n = static_cast<double>(samples);

    DiagnosticReport rep;
    rep.samples = samples;

    const TangentVector mean{x, sum / n};
    const double mean_sq = m.inner(x, mean, mean);
    rep.bias_estimate = m.norm(x, {x, mean.coords - grad.coords});
    // SE of the mean vector: sqrt(trace of its covariance) in the metric at x.
    const double scatter = std::max(0.0, sum_sq / n - mean_sq);
    rep.bias_se = std::sqrt(scatter / n);
    rep.bias_limit = bias_bound(declared, eta);
    rep.bias_pass = rep.bias_estimate <= rep.bias_limit + 3.0 * rep.bias_se;

    rep.second_moment_estimate = sum_sq / n;
    const double var_sq = std::max(0.0, sum_sq2 / n - rep.second_moment_estimate * rep.second_moment_estimate);
    rep.second_moment_se = std::sqrt(var_sq / n);
    rep.second_moment_limit = second_moment_bound(declared, eta, grad_norm);
    rep.second_moment_pass =
        rep.second_moment_estimate <= rep.second_moment_limit + 3.0 * rep.second_moment_se;
    return rep;
}

} // namespace geotrack
