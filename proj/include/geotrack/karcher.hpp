#pragma once

#include <memory>

#include "geotrack/optimizer.hpp"
#include "geotrack/spd.hpp"

namespace geotrack {

enum class DriftKind { ConstantSpeed, DecayingSpeed };

/// Parameters of one time-varying Karcher-mean scenario: N drifting SPD(m)
/// measurement matrices per half-step over a horizon of T iterations.
struct KarcherInstance {
    int m = 3;
    int N = 10;
    std::int64_t horizon = 1000;
    DriftKind drift = DriftKind::ConstantSpeed;
    double omega = 0.0;                ///< drift speed; phase is omega*s or 2*omega*sqrt(s+1)
    double lambda_min = 0.5;           ///< base eigenvalues log-uniform in [lambda_min, lambda_max]
    double lambda_max = 2.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Karcher mean of a fixed set of SPD matrices (arithmetic-mean start,
/// fixed-step Riemannian gradient descent to |grad| <= grad_tol).
Eigen::MatrixXd karcher_mean(const std::vector<Eigen::MatrixXd>& matrices,
                             double grad_tol = 1e-10, std::int64_t max_iters = 100000);

/// A generated scenario: base matrices Abar_i = Q_i diag(lambda) Q_i^T with
/// log-uniform eigenvalues, drifting along fixed random unit-speed tangent
/// directions D_i as A_{t,i} = Exp_{Abar_i}(phi(t/2) D_i). The time-varying
/// cost is f_t(X) = (1/2N) sum_i dist(X, A_{t,i})^2. Immutable and cheap to
/// copy; the projection domain is a geodesic ball around the Karcher mean of
/// the bases with drift allowance built into the radius.
class KarcherProblem {
public:
    static KarcherProblem generate(const SpdManifold& m, const KarcherInstance& inst,
                                   RandomStream& rng);

    /// Scenario with explicit base matrices and drift directions (directions are
    /// normalized to unit speed in the metric at their base).
    static KarcherProblem from_matrices(const SpdManifold& m, const KarcherInstance& inst,
                                        const std::vector<Eigen::MatrixXd>& bases,
                                        const std::vector<Eigen::MatrixXd>& directions);

    const SpdManifold& manifold() const;
    const KarcherInstance& instance() const;
    const GeodesicBall& domain_ball() const;

    /// The measurement set {A_{t,i}} at half-step t.
    std::vector<Eigen::MatrixXd> matrices_at(std::int64_t t) const;

    double evaluate(std::int64_t t, const Eigen::MatrixXd& x) const;

    /// Riemannian gradient -(1/N) sum_i Log_X(A_{t,i}).
    Eigen::MatrixXd riemannian_gradient(std::int64_t t, const Eigen::MatrixXd& x) const;

    /// Objective view with declared constants, its own evaluation counter and
    /// its own per-half-step measurement cache (single-owner, not thread-safe).
    TimeVaryingObjective make_objective(const ProblemConstants& c) const;

private:
    struct Body;
    std::shared_ptr<const Body> body_;
};

/// Ground-truth minimizer at half-step t: warm-started gradient descent with
/// fixed step 1/smoothness until |grad|_X <= grad_tol; SolverError on
/// non-convergence within max_iters.
ManifoldPoint true_minimizer(const KarcherProblem& p, std::int64_t t,
                             const ManifoldPoint& warm_start, double smoothness,
                             double grad_tol = 1e-10, std::int64_t max_iters = 100000);

/// Minimizers at every half-step 0..2T+1, warm-chained from the ball center.
std::vector<ManifoldPoint> minimizer_chain(const KarcherProblem& p, std::int64_t T,
                                           double smoothness, double grad_tol = 1e-10);

/// Drift speed omega such that the empirical sup of |f_t - f_{t+1}| over probe
/// points and steps lands in [0.8, 1.0] * delta_target (bisection; SolverError
/// if 60 refinement steps are not enough).
double calibrate_omega(const SpdManifold& m, const KarcherInstance& inst, double delta_target,
                       int probes, RandomStream& rng);

/// Margin applied to the declared delta when calibrating a multi-run study:
/// the calibration scenario's probe sup sits a few percent off other scenarios'
/// suprema, so aiming at this fraction keeps every run inside the declared
/// bound.
inline constexpr double kCalibrationSafety = 0.85;

/// Empirical sup of |f_t - f_{t+1}| over random probe points in the domain ball
/// and random steps.
double measure_delta_hat(const KarcherProblem& p, int probes, RandomStream& rng);

/// Per-run error and regret series. e_k and the cumulative tracking regret are
/// defined for k = 0..T; ebar_k and the estimation regret need x_{k+1} and stop
/// at k = T-1. vt_cum[k] is the path variation accumulated before step k.
struct MetricsTrace {
    std::vector<double> e;           ///< size T+1
    std::vector<double> ebar;        ///< size T
    std::vector<double> reg_track;   ///< size T+1, cumulative
    std::vector<double> reg_est;     ///< size T, cumulative
    std::vector<double> vt_cum;      ///< size T+1, vt_cum[0] = 0
    double delta_hat = 0.0;          ///< max over k of |f_k(x_k) - f_{k+}(x_k)|
    double v_hat = 0.0;              ///< max consecutive-half-step minimizer distance
    bool assumptions_ok = true;      ///< delta_hat <= delta and v_hat <= V
};

MetricsTrace evaluate_run(const KarcherProblem& p, const ProblemConstants& c,
                          const RunRecord& rec, const std::vector<ManifoldPoint>& minimizers);

/// Pointwise averages over runs for one algorithm arm.
struct ArmTrace {
    std::vector<double> e_mean, e_stderr, ebar_mean, reg_track_mean, reg_est_mean, vt_cum_mean;
    double delta_hat_max = 0.0;
    double v_hat_max = 0.0;
    int flagged_runs = 0;
};

struct StudyResult {
    std::int64_t T = 0;
    int runs = 0;
    std::vector<double> alpha_k, eta_k;   ///< schedule parameters, k = 0..T
    ArmTrace zeroth;
    ArmTrace first;                       ///< empty when the first-order arm is off
    bool has_first_order = false;
    double mean_ball_radius = 0.0;
};

/// Number of worker threads for run fan-out: hardware concurrency capped by the
/// GEOTRACK_THREADS environment variable and by the run count.
int run_parallelism(int runs);

/// Independent runs (fresh scenario per run via rng substreams), averaged
/// pointwise; optionally also the first-order arm (grad f_k in place of the
/// oracle, same schedule, same scenarios). Deterministic for a fixed master
/// stream regardless of thread count.
StudyResult averaged_study(const SpdManifold& m, const KarcherInstance& inst,
                           const ProblemConstants& c, const StepSchedule& schedule, int runs,
                           RandomStream& rng, bool with_first_order = true);

} // namespace geotrack
