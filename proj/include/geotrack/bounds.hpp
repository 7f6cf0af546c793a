#pragma once

#include <cstdint>
#include <optional>

#include "geotrack/errors.hpp"

namespace geotrack {

/// Problem constants: smoothness L, strong convexity sigma in (0, L], temporal
/// variation bound delta >= 0, minimizer drift bound V >= 0, curvature lower
/// bound kappa <= 0, domain diameter R > 0, intrinsic dimension d >= 1, and the
/// gradient bound G > 0.
struct ProblemConstants {
    double L = 1.0;
    double sigma = 1.0;
    double delta = 0.0;
    double V = 0.0;
    double kappa = 0.0;
    double R = 1.0;
    int d = 1;
    double G = 1.0;

    void validate() const;
};

/// Curvature distortion factor zeta(kappa, e) = e sqrt(|kappa|) / tanh(e sqrt(|kappa|)),
/// extended continuously to 1 at kappa = 0 or e = 0. Always >= 1, nondecreasing
/// in e and in |kappa|.
double zeta(double kappa, double e);

/// Inverse helper: the kappa <= 0 with zeta(kappa, R) equal to the given target.
double kappa_for_zeta(double zeta_target, double R);

/// Upper end of the admissible constant step-size interval,
/// sigma / (2 L^2 (d+4) zeta(kappa, R)).
double alpha_max(const ProblemConstants& c);

/// Contraction factor rho(alpha) = sqrt(2(d+4) L^2 zeta(kappa,R) alpha^2 - sigma alpha + 1).
double rho(const ProblemConstants& c, double alpha);

/// One-step conditional tracking-error bound: E[ebar_k^2 | x_k] <= psi(e_k),
///   psi(e) = (2(d+4) L^2 zeta(kappa,e) a^2 - sigma a + 1) e^2
///          + a (L eta (d+3)^{3/2} + (2 delta / eta) sqrt(d)) e
///          + ((L^2 eta^2 / 2)(d+6)^3 + 2 L delta (d+4)^2 + (2 delta^2/eta^2) d)
///            * zeta(kappa,e) a^2,
/// with the curvature factor evaluated at e itself.
double psi(double e, const ProblemConstants& c, double alpha, double eta);

/// Asymptotic tracking bound report for a constant step size.
struct BoundReport {
    double zeta_R = 1.0;
    double rho = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::optional<double> theta_bar;   ///< theta2 at the optimal eta; absent when delta = 0
    double D = 0.0;                    ///< alpha * max(theta1, theta2)
    double Delta = 0.0;                ///< (D + 2V) / (1 - rho)
    double alpha = 0.0;
    double eta = 0.0;
};

/// Tracking-error limit Delta = (D + 2V)/(1 - rho) with
///   theta1 = (L eta (d+3)^{3/2} + (2/eta) delta sqrt(d)) / (2 rho),
///   theta2 = sqrt(((L^2 eta^2/2)(d+6)^3 + 2 L delta (d+4)^2 + (2 delta^2/eta^2) d)
///            * zeta(kappa, R)).
/// Requires alpha strictly inside (0, alpha_max) so that rho < 1.
BoundReport delta_bound(const ProblemConstants& c, double alpha, double eta);

/// Optimal oracle precision eta_bar = (4 delta^2 d / (L^2 (d+6)^3))^{1/4}.
/// Degenerate at delta = 0: raises DomainError advising a freely small eta.
double optimal_eta(const ProblemConstants& c);

struct OptimalAlpha {
    double value = 0.0;
    bool grid_fallback = false;   ///< no usable quadratic root; grid minimizer used
};

/// Step size minimizing Delta at eta_bar: the admissible root of
/// A alpha^2 + B alpha + C = 0 per the optimality conditions, with a 1e4-point
/// grid minimizer as fallback when no root lies in the open interval.
OptimalAlpha optimal_alpha(const ProblemConstants& c);

/// Iterations needed to enter the Delta + epsilon ball.
struct ComplexityBound {
    bool immediate = false;        ///< e0 already within Delta
    std::int64_t iterations = 0;   ///< smallest K with rho^K (e0 - Delta) <= epsilon, >= 1
    double alt_estimate = 0.0;     ///< alternative closed form, reported for comparison
};

/// Derived by iterating E[e_{k+1}] <= rho E[e_k] + D + 2V from e0:
/// K = ceil(log((1-rho) eps / ((1-rho) e0 - D - 2V)) / log rho), clamped to >= 1;
/// "immediate" when (1-rho) e0 - D - 2V <= 0. The frequently quoted closed form
/// log[(D + (1-rho) eps) / ((1-rho) e0 - 2V)] / log rho disagrees with the
/// recursion already on simple inputs; it is reported alongside, never used.
ComplexityBound complexity_K(const ProblemConstants& c, const BoundReport& report,
                             double e0, double epsilon);

/// Contraction factors and measured endpoints feeding the regret bounds.
struct RegretInputs {
    double rho0 = 0.0;       ///< rho(alpha_0)
    double rho1 = 0.0;       ///< rho(alpha_1)
    double rhoT = 0.0;       ///< rho(alpha_T)
    double rhoT1 = 0.0;      ///< rho(alpha_{T+1})
    double cbar = 1.0;
    double e0_mean = 0.0;    ///< measured E[e_0]
    double eT_mean = 0.0;    ///< measured E[e_T]
    double ebar0_mean = 0.0; ///< measured E[ebar_0]
    double ebarT_mean = 0.0; ///< measured E[ebar_T]
    double VT = 0.0;         ///< measured path variation
};

struct RegretBounds {
    double track = 0.0;
    double est = 0.0;
};

/// Doubling-schedule regret bounds with the sqrt(T) constant sqrt(2)/(sqrt(2)-1):
///   track <= G/(1-max(rho0,rhoT)) (E[e0] - rhoT E[eT] + cbar C sqrt(T) + V_T),
///   est   <= G/(1-max(rho1,rhoT1)) (E[ebar0] - rhoT1 E[ebarT] + cbar C sqrt(T)
///            + max(rho1,rhoT1) V_T).
/// Any rho >= 1 raises DomainError.
RegretBounds regret_upper_bounds(const ProblemConstants& c, const RegretInputs& in,
                                 std::int64_t T);

} // namespace geotrack
