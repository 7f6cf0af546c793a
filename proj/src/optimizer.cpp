#include "geotrack/optimizer.hpp"

#include <cmath>

namespace geotrack {

AlgorithmParams StepSchedule::params_at(std::int64_t k) const {
    require(k >= 0, "schedule: iteration index must be >= 0");
    if (kind_ != Kind::DoublingRegret) return fixed_;
    const int m = period_exponent(k);
    if (m >= static_cast<int>(periods_.size()))
        throw ConfigError("schedule: iteration beyond the constructed doubling periods");
    return periods_[m];
}

int StepSchedule::period_exponent(std::int64_t k) {
    require(k >= 0, "schedule: iteration index must be >= 0");
    int m = 0;
    for (std::int64_t v = k + 1; v > 1; v >>= 1) ++m;   // floor(log2(k + 1))
    return m;
}

std::int64_t StepSchedule::period_length(std::int64_t k) {
    return std::int64_t{1} << period_exponent(k);
}

StepSchedule make_constant_schedule(double alpha, double eta) {
    require(alpha > 0.0, "schedule: alpha must be positive");
    require(eta > 0.0, "schedule: eta must be positive");
    StepSchedule s(StepSchedule::Kind::Constant);
    s.fixed_ = {alpha, eta, 1.0};
    return s;
}

StepSchedule make_optimal_schedule(const ProblemConstants& c) {
    const double eta = optimal_eta(c);
    const OptimalAlpha alpha = optimal_alpha(c);
    StepSchedule s(StepSchedule::Kind::OptimalConstant);
    s.fixed_ = {alpha.value, eta, 1.0};
    return s;
}

double schedule_drive(const ProblemConstants& c, const AlgorithmParams& p) {
    const double d = static_cast<double>(c.d);
    const double core = 0.5 * c.L * c.L * p.eta * p.eta * std::pow(d + 6.0, 3)
                      + 2.0 * c.L * c.delta * (d + 4.0) * (d + 4.0)
                      + 2.0 * c.delta * c.delta * d / (p.eta * p.eta);
    return p.alpha * std::sqrt(core * zeta(c.kappa, c.R));
}

namespace {

AlgorithmParams doubling_period_params(const ProblemConstants& c, double cbar, int m) {
    const double d = static_cast<double>(c.d);
    const double z = zeta(c.kappa, c.R);
    const double Tk = static_cast<double>(std::int64_t{1} << m);
    const double cap = c.sigma / (2.0 * c.L * c.L * (d + 4.0) * z);

    double alpha;
    if (c.delta == 0.0) {
        // Degenerate case: Cbar_k > 0 with Abar = Bbar_k = 0, so the discriminant
        // inequality holds for every step size; only the rho < 1 cap binds.
        alpha = 0.99 * cap;
    } else {
        const double a_bar = 4.0 * c.L * c.L * c.delta * c.delta * z * z
                           * (std::pow(d + 4.0, 4) - d * std::pow(d + 6.0, 3));
        if (std::abs(a_bar) < 1e-30)
            throw ScheduleError(m, "Abar vanishes; root selection is ill-conditioned");
        const double b_bar = -4.0 * c.L * c.delta * (d + 4.0) * (d + 4.0) * z * cbar * cbar / Tk;
        const double c_bar_k = std::pow(cbar, 4) / (Tk * Tk);
        const double disc = b_bar * b_bar - 4.0 * a_bar * c_bar_k;
        if (disc < 0.0)
            throw ScheduleError(m, "negative discriminant selecting the step size");
        // For Abar < 0 (d >= 5) this is the admissible nonnegative root.
        const double y2 = (-b_bar - std::sqrt(disc)) / (2.0 * a_bar);
        if (!(y2 > 0.0))
            throw ScheduleError(m, "no positive step-size root");
        alpha = 0.99 * std::min(std::sqrt(y2), cap);
    }

    // eta from A eta^4 + B_k eta^2 + C <= 0, re-verifying feasibility.
    const double A = 0.5 * c.L * c.L * std::pow(d + 6.0, 3) * z;
    const double B = 2.0 * c.L * c.delta * (d + 4.0) * (d + 4.0) * z
                   - cbar * cbar / (alpha * alpha * Tk);
    const double C = 2.0 * c.delta * c.delta * d * z;
    if (!(B < 0.0))
        throw ScheduleError(m, "B_k not negative after the alpha choice");
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0)
        throw ScheduleError(m, "negative precision discriminant after the alpha choice");
    const double sq = std::sqrt(disc);
    const double x1 = (-B + sq) / (2.0 * A);
    const double x2 = (x1 > 0.0) ? (C / A) / x1 : 0.0;   // stable small root via Vieta
    return {alpha, 0.5 * (std::sqrt(x2) + std::sqrt(x1)), cbar};
}

} // namespace

StepSchedule make_doubling_schedule(const ProblemConstants& c, double cbar,
                                    int max_period_exponent) {
    c.validate();
    require(cbar > 0.0, "schedule: cbar must be positive");
    require(max_period_exponent >= 0 && max_period_exponent <= 62,
            "schedule: period exponent out of range");
    StepSchedule s(StepSchedule::Kind::DoublingRegret);
    s.periods_.reserve(max_period_exponent + 1);
    for (int m = 0; m <= max_period_exponent; ++m)
        s.periods_.push_back(doubling_period_params(c, cbar, m));
    return s;
}

namespace {

// Effective step factor keeping the pre-projection point within the
// representable range of the matrix functions.
double capped_factor(const Manifold& m, const ManifoldPoint& x, const TangentVector& v,
                     double alpha, bool* capped) {
    const double reach = alpha * m.norm(x, v);
    if (reach > kMaxGeodesicReach) {
        if (capped) *capped = true;
        return alpha * (kMaxGeodesicReach / reach);
    }
    return alpha;
}

} // namespace

ManifoldPoint step(const Manifold& m, const ManifoldPoint& x, const OracleSample& g,
                   double alpha, const GeodesicBall& ball) {
    require(alpha > 0.0, "step: alpha must be positive");
    const double eff = capped_factor(m, x, g.value, alpha, nullptr);
    return project_ball(m, ball, m.exp(x, scaled(g.value, -eff)));
}

RunRecord run(const Manifold& m, const TimeVaryingObjective& f, const ManifoldPoint& x0,
              const GeodesicBall& ball, const StepSchedule& schedule, std::int64_t T,
              RandomStream& rng, GradientSource source) {
    require(T >= 1, "run: T must be >= 1");
    require(ball_contains(m, ball, x0), "run: x0 must lie in the constraint ball");
    if (schedule.kind() != StepSchedule::Kind::DoublingRegret) {
        const double a = schedule.params_at(0).alpha;
        if (!(a > 0.0) || !(a < alpha_max(f.constants())))
            throw ConfigError("run: constant step size outside (0, sigma/(2 L^2 (d+4) zeta)); "
                              "tracking-bound prerequisites violated");
    }
    if (source == GradientSource::FirstOrder)
        require(f.has_gradient(), "run: first-order variant needs an analytic gradient");

    RunRecord rec;
    rec.seed = rng.seed();
    rec.source = source;
    rec.iterates.reserve(T + 1);
    rec.params_used.reserve(T);
    if (source == GradientSource::ZerothOrder) rec.oracle_samples.reserve(T);

    ManifoldPoint x = x0;
    rec.iterates.push_back(x);
    for (std::int64_t k = 0; k < T; ++k) {
        const AlgorithmParams p = schedule.params_at(k);
        if (source == GradientSource::ZerothOrder) {
            OracleSample g = estimate_gradient(m, f, TimeIndex::at_iteration(k), x, p.eta, rng);
            if (g.capped) ++rec.capped_probes;
            bool capped = false;
            const double eff = capped_factor(m, x, g.value, p.alpha, &capped);
            if (capped) ++rec.capped_steps;
            x = project_ball(m, ball, m.exp(x, scaled(g.value, -eff)));
            rec.oracle_samples.push_back(std::move(g));
        } else {
            const TangentVector grad = f.gradient(TimeIndex::at_iteration(k), x);
            bool capped = false;
            const double eff = capped_factor(m, x, grad, p.alpha, &capped);
            if (capped) ++rec.capped_steps;
            x = project_ball(m, ball, m.exp(x, scaled(grad, -eff)));
        }
        rec.iterates.push_back(x);
        rec.params_used.push_back(p);
    }
    return rec;
}

} // namespace geotrack
