#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

#include "geotrack/bounds.hpp"
#include "geotrack/manifold.hpp"

namespace geotrack {

/// Time as an integer count of half-steps: t = 2k is iteration k, t = 2k+1 is
/// the mid-update instant k+ = k + 1/2. Objectives never see fractional time.
struct TimeIndex {
    std::int64_t half_steps = 0;

    static TimeIndex at_iteration(std::int64_t k) { return {2 * k}; }
    bool integer_time() const { return half_steps % 2 == 0; }
    std::int64_t iteration() const { return half_steps / 2; }
    TimeIndex next() const { return {half_steps + 1}; }
};

/// Time-varying objective f_t indexed on half-steps, with its declared problem
/// constants and an optional analytic Riemannian gradient. Evaluations are
/// counted (shared across copies) so the two-evaluations-per-oracle-call
/// contract is checkable.
class TimeVaryingObjective {
public:
    using EvalFn = std::function<double(TimeIndex, const ManifoldPoint&)>;
    using GradFn = std::function<TangentVector(TimeIndex, const ManifoldPoint&)>;

    TimeVaryingObjective(EvalFn eval, ProblemConstants constants, GradFn grad = nullptr)
        : eval_(std::move(eval)), grad_(std::move(grad)), constants_(constants),
          eval_count_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
        constants_.validate();
    }

    double operator()(TimeIndex t, const ManifoldPoint& x) const {
        require(t.half_steps >= 0, "objective: time must be >= 0");
        eval_count_->fetch_add(1, std::memory_order_relaxed);
        return eval_(t, x);
    }

    const ProblemConstants& constants() const { return constants_; }

    bool has_gradient() const { return static_cast<bool>(grad_); }

    TangentVector gradient(TimeIndex t, const ManifoldPoint& x) const {
        require(has_gradient(), "objective: no analytic gradient available");
        return grad_(t, x);
    }

    std::uint64_t eval_count() const { return eval_count_->load(std::memory_order_relaxed); }

private:
    EvalFn eval_;
    GradFn grad_;
    ProblemConstants constants_;
    std::shared_ptr<std::atomic<std::uint64_t>> eval_count_;
};

/// One two-point oracle draw: g = ((f_{k+}(Exp_x(eta u)) - f_k(x)) / eta) u.
struct OracleSample {
    TangentVector value;        ///< g, based at the query point
    double point_eval_k = 0.0;      ///< f_k(x)
    double point_eval_kplus = 0.0;  ///< f_{k+}(Exp_x(eta u))
    TangentVector direction;    ///< u
    double eta = 0.0;           ///< precision actually used (see `capped`)
    bool capped = false;        ///< probe length hit the representability cap
};

/// Longest geodesic probe/step the SPD matrix functions can represent without
/// losing the small eigenvalues of the endpoint in double precision. Draws
/// whose probe would exceed this run at the reduced precision eta' with
/// eta' |u| equal to the cap; the sample is marked `capped`.
inline constexpr double kMaxGeodesicReach = 10.0;

/// Oracle evaluated along a caller-supplied direction (used by tests that pin u).
OracleSample oracle_sample_with_direction(const Manifold& m, const TimeVaryingObjective& f,
                                          TimeIndex k, const ManifoldPoint& x, double eta,
                                          const TangentVector& u);

/// The two-point time-varying estimator: samples u = P u0, evaluates f at
/// half-step t at x and at half-step t+1 at Exp_x(eta u), in that order.
/// Exactly two objective evaluations per call.
OracleSample estimate_gradient(const Manifold& m, const TimeVaryingObjective& f,
                               TimeIndex k, const ManifoldPoint& x, double eta,
                               RandomStream& rng);

/// Bias bound: |E[g] - grad f_{k+}(x)| <= (L eta / 2)(d+3)^{3/2} + (delta/eta) sqrt(d).
double bias_bound(const ProblemConstants& c, double eta);

/// Second-moment bound: E|g|^2 <= (L^2 eta^2 / 2)(d+6)^3 + 2 L delta (d+4)^2
/// + (2 delta^2 / eta^2) d + 2 (d+4) grad_norm^2.
double second_moment_bound(const ProblemConstants& c, double eta, double grad_norm);

/// Central finite differences over a metric-orthonormal tangent basis, with
/// step 1e-5 (1 + |x|). Consumes 2d objective evaluations.
TangentVector finite_difference_gradient(const Manifold& m, const TimeVaryingObjective& f,
                                         TimeIndex t, const ManifoldPoint& x);

/// Monte-Carlo certification of the oracle bounds at one query point.
struct DiagnosticReport {
    std::size_t samples = 0;
    double bias_estimate = 0.0;
    double bias_se = 0.0;
    double bias_limit = 0.0;
    bool bias_pass = false;
    double second_moment_estimate = 0.0;
    double second_moment_se = 0.0;
    double second_moment_limit = 0.0;
    bool second_moment_pass = false;

    bool pass() const { return bias_pass && second_moment_pass; }
};

/// Estimates |E[g] - grad f_{k+}(x)| and E|g|^2 over `samples` oracle draws and
/// compares against the declared-constant bounds; PASS means estimate <= bound
/// + 3 standard errors. The reference gradient is the objective's analytic one
/// when available, else central finite differences. Fewer than 1000 samples are
/// rejected for lack of statistical power. `understate_L` scales the L used in
/// the bounds only (negative-control knob; 1 = honest).
DiagnosticReport verify_oracle_bounds(const Manifold& m, const TimeVaryingObjective& f,
                                      TimeIndex k, const ManifoldPoint& x, double eta,
                                      std::size_t samples, RandomStream& rng,
                                      double understate_L = 1.0);

} // namespace geotrack
