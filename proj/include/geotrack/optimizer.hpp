#pragma once

#include <vector>

#include "geotrack/oracle.hpp"

namespace geotrack {

/// Per-iteration algorithm parameters: step size alpha, oracle precision eta,
/// and the free doubling-trick constant cbar.
struct AlgorithmParams {
    double alpha = 0.0;
    double eta = 0.0;
    double cbar = 1.0;
};

/// Step-size / precision schedule. Constant and OptimalConstant return the same
/// parameters at every iteration; DoublingRegret is piecewise constant on the
/// periods T_k = 2^m covering k in [2^m - 1, 2^{m+1} - 2].
class StepSchedule {
public:
    enum class Kind { Constant, OptimalConstant, DoublingRegret };

    Kind kind() const { return kind_; }
    AlgorithmParams params_at(std::int64_t k) const;

    /// m with k in [2^m - 1, 2^{m+1} - 2].
    static int period_exponent(std::int64_t k);
    /// T_k = 2^m.
    static std::int64_t period_length(std::int64_t k);

    /// Parameters of period m (DoublingRegret only).
    const std::vector<AlgorithmParams>& period_params() const { return periods_; }

    friend StepSchedule make_constant_schedule(double alpha, double eta);
    friend StepSchedule make_optimal_schedule(const ProblemConstants& c);
    friend StepSchedule make_doubling_schedule(const ProblemConstants& c, double cbar,
                                               int max_period_exponent);

private:
    explicit StepSchedule(Kind kind) : kind_(kind) {}

    Kind kind_;
    AlgorithmParams fixed_;
    std::vector<AlgorithmParams> periods_;
};

StepSchedule make_constant_schedule(double alpha, double eta);

/// Constant schedule at the tracking-optimal pair (alpha_bar, eta_bar).
StepSchedule make_optimal_schedule(const ProblemConstants& c);

/// Doubling-trick schedule: per period T_k = 2^m chooses
///   alpha_k = 0.99 min{ sqrt(y2), sigma/(2 L^2 (d+4) zeta) },
/// with y2 the admissible root of Abar a^2 + Bbar_k a + Cbar_k = 0 in alpha^2
/// (sign-aware for Abar < 0), then eta_k = midpoint of [sqrt(x2), sqrt(x1)]
/// from A eta^4 + B_k eta^2 + C <= 0. Feasibility (B_k < 0, discriminant >= 0)
/// is re-verified after the alpha choice; failures raise ScheduleError with the
/// offending period. The construction guarantees D_k <= cbar / sqrt(T_k).
StepSchedule make_doubling_schedule(const ProblemConstants& c, double cbar = 1.0,
                                    int max_period_exponent = 42);

/// D_k = alpha_k theta2(eta_k): the drive term the doubling periods must keep
/// below cbar / sqrt(T_k).
double schedule_drive(const ProblemConstants& c, const AlgorithmParams& p);

/// One projected iterate: P_ball[Exp_x(-alpha g)].
ManifoldPoint step(const Manifold& m, const ManifoldPoint& x, const OracleSample& g,
                   double alpha, const GeodesicBall& ball);

enum class GradientSource { ZerothOrder, FirstOrder };

/// Full trajectory of one run. For first-order runs (grad f_k in place of the
/// oracle) oracle_samples stays empty; otherwise it has one entry per iteration.
/// capped_* count the rare draws whose probe or update exceeded the
/// representability cap kMaxGeodesicReach and ran at the capped length.
struct RunRecord {
    std::vector<ManifoldPoint> iterates;       ///< x_0 .. x_T
    std::vector<OracleSample> oracle_samples;  ///< per iteration (zeroth-order only)
    std::vector<AlgorithmParams> params_used;  ///< per iteration
    std::uint64_t seed = 0;
    GradientSource source = GradientSource::ZerothOrder;
    std::int64_t capped_probes = 0;
    std::int64_t capped_steps = 0;
};

/// Runs T projected zeroth-order iterations (exactly 2T objective evaluations),
/// or the first-order variant when `source` is FirstOrder. Constant-kind
/// schedules must keep alpha inside (0, sigma/(2 L^2 (d+4) zeta(kappa,R))) for
/// the declared constants, else ConfigError.
RunRecord run(const Manifold& m, const TimeVaryingObjective& f, const ManifoldPoint& x0,
              const GeodesicBall& ball, const StepSchedule& schedule, std::int64_t T,
              RandomStream& rng, GradientSource source = GradientSource::ZerothOrder);

} // namespace geotrack
