#include "geotrack/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geotrack {

namespace {

// The three eta-dependent oracle second-moment terms without the zeta factor:
// (L^2 eta^2 / 2)(d+6)^3 + 2 L delta (d+4)^2 + (2 delta^2 / eta^2) d.
double second_moment_core(const ProblemConstants& c, double eta) {
    const double d = static_cast<double>(c.d);
    return 0.5 * c.L * c.L * eta * eta * std::pow(d + 6.0, 3)
         + 2.0 * c.L * c.delta * (d + 4.0) * (d + 4.0)
         + 2.0 * c.delta * c.delta * d / (eta * eta);
}

// L eta (d+3)^{3/2} + (2 delta / eta) sqrt(d): twice the oracle bias bound.
double bias_core(const ProblemConstants& c, double eta) {
    const double d = static_cast<double>(c.d);
    return c.L * eta * std::pow(d + 3.0, 1.5) + 2.0 * c.delta * std::sqrt(d) / eta;
}

double theta2_at(const ProblemConstants& c, double eta) {
    return std::sqrt(second_moment_core(c, eta) * zeta(c.kappa, c.R));
}

} // namespace

void ProblemConstants::validate() const {
    require(sigma > 0.0 && sigma <= L, "constants: need 0 < sigma <= L");
    require(delta >= 0.0, "constants: delta must be >= 0");
    require(V >= 0.0, "constants: V must be >= 0");
    require(kappa <= 0.0, "constants: kappa must be <= 0");
    require(R > 0.0, "constants: R must be > 0");
    require(d >= 1, "constants: d must be >= 1");
    require(G > 0.0, "constants: G must be > 0");
}

double zeta(double kappa, double e) {
    require(kappa <= 0.0, "zeta: kappa must be <= 0");
    require(e >= 0.0, "zeta: e must be >= 0");
    const double x = e * std::sqrt(-kappa);
    if (x < 1e-4) return 1.0 + x * x / 3.0;   // series; x/tanh(x) - 1 = x^2/3 - O(x^4)
    return x / std::tanh(x);
}

double kappa_for_zeta(double zeta_target, double R) {
    require(zeta_target >= 1.0, "kappa_for_zeta: target must be >= 1");
    require(R > 0.0, "kappa_for_zeta: R must be > 0");
    if (zeta_target == 1.0) return 0.0;
    // x/tanh(x) is strictly increasing; bracket and bisect.
    double lo = 0.0, hi = zeta_target + 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double val = (mid < 1e-8) ? 1.0 : mid / std::tanh(mid);
        (val < zeta_target ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    return -(x / R) * (x / R);
}

double alpha_max(const ProblemConstants& c) {
    c.validate();
    const double d = static_cast<double>(c.d);
    return c.sigma / (2.0 * c.L * c.L * (d + 4.0) * zeta(c.kappa, c.R));
}

double rho(const ProblemConstants& c, double alpha) {
    const double d = static_cast<double>(c.d);
    const double z = zeta(c.kappa, c.R);
    return std::sqrt(2.0 * (d + 4.0) * c.L * c.L * z * alpha * alpha - c.sigma * alpha + 1.0);
}

double psi(double e, const ProblemConstants& c, double alpha, double eta) {
    c.validate();
    require(alpha > 0.0 && eta > 0.0, "psi: alpha and eta must be positive");
    require(e >= 0.0, "psi: e must be >= 0");
    const double d = static_cast<double>(c.d);
    const double ze = zeta(c.kappa, e);
    const double quad = 2.0 * (d + 4.0) * c.L * c.L * ze * alpha * alpha - c.sigma * alpha + 1.0;
    return quad * e * e + alpha * bias_core(c, eta) * e
         + second_moment_core(c, eta) * ze * alpha * alpha;
}

BoundReport delta_bound(const ProblemConstants& c, double alpha, double eta) {
    c.validate();
    require(eta > 0.0, "delta_bound: eta must be positive");
    if (!(alpha > 0.0) || !(alpha < alpha_max(c)))
        throw DomainError("delta_bound: alpha outside (0, sigma/(2 L^2 (d+4) zeta)); "
                          "rho would be >= 1");
    BoundReport r;
    r.alpha = alpha;
    r.eta = eta;
    r.zeta_R = zeta(c.kappa, c.R);
    r.rho = rho(c, alpha);
    r.theta1 = bias_core(c, eta) / (2.0 * r.rho);
    r.theta2 = theta2_at(c, eta);
    if (c.delta > 0.0) r.theta_bar = theta2_at(c, optimal_eta(c));
    if (!(r.theta2 > r.theta1))
        throw DomainError("delta_bound: theta2 <= theta1; this contradicts the "
                          "admissible-step analysis");
    r.D = alpha * std::max(r.theta1, r.theta2);
    r.Delta = (r.D + 2.0 * c.V) / (1.0 - r.rho);
    return r;
}

double optimal_eta(const ProblemConstants& c) {
    c.validate();
    if (c.delta == 0.0)
        throw DomainError("optimal_eta: degenerate at delta = 0; the minimizing eta "
                          "tends to 0, pick any freely small eta instead");
    const double d = static_cast<double>(c.d);
    return std::pow(4.0 * c.delta * c.delta * d / (c.L * c.L * std::pow(d + 6.0, 3)), 0.25);
}

namespace {

double grid_minimize_delta(const ProblemConstants& c, double eta, int points) {
    const double amax = alpha_max(c);
    double best_alpha = amax / (points + 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= points; ++i) {
        const double a = amax * static_cast<double>(i) / (points + 1.0);
        const double val = delta_bound(c, a, eta).Delta;
        if (val < best) {
            best = val;
            best_alpha = a;
        }
    }
    return best_alpha;
}

} // namespace

OptimalAlpha optimal_alpha(const ProblemConstants& c) {
    const double eta_bar = optimal_eta(c);
    const double theta_bar = theta2_at(c, eta_bar);
    const double d = static_cast<double>(c.d);
    const double z = zeta(c.kappa, c.R);
    const double lzd = c.L * c.L * z * (d + 4.0);   // L^2 zeta (d+4)

    const double A = std::pow(8.0 * c.V * lzd + c.sigma * theta_bar, 2) - 8.0 * theta_bar * theta_bar * lzd;
    const double B = -4.0 * c.V * (theta_bar * c.sigma * c.sigma + 8.0 * c.V * lzd * c.sigma
                                   + 8.0 * theta_bar * lzd);
    const double C = std::pow(2.0 * c.sigma * c.V + 2.0 * theta_bar, 2) - 4.0 * theta_bar * theta_bar;

    const double amax = alpha_max(c);
    const double scale = std::max({std::abs(A) * amax * amax, std::abs(B) * amax, std::abs(C)});

    double roots[2];
    int n_roots = 0;
    if (std::abs(A) * amax * amax > 1e-14 * scale) {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            // numerically stable pairing: q = -(B + sign(B) sqrt(disc)) / 2
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
            if (q != 0.0) {
                roots[n_roots++] = q / A;
                roots[n_roots++] = C / q;
            } else {
                roots[n_roots++] = 0.0;
            }
        }
    } else if (std::abs(B) * amax > 1e-14 * scale) {
        roots[n_roots++] = -C / B;
    }

    OptimalAlpha out;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_roots; ++i) {
        const double a = roots[i];
        if (!(a > 0.0) || !(a < amax)) continue;
        const double val = delta_bound(c, a, eta_bar).Delta;
        if (val < best) {
            best = val;
            out.value = a;
        }
    }
    if (!std::isfinite(best)) {
        out.value = grid_minimize_delta(c, eta_bar, 10000);
        out.grid_fallback = true;
    }
    return out;
}

ComplexityBound complexity_K(const ProblemConstants& c, const BoundReport& report,
                             double e0, double epsilon) {
    require(epsilon > 0.0, "complexity_K: epsilon must be positive");
    require(e0 >= 0.0, "complexity_K: e0 must be >= 0");
    const double r = report.rho;
    require(r > 0.0 && r < 1.0, "complexity_K: need rho in (0, 1)");
    const double one_minus = 1.0 - r;
    const double drive = report.D + 2.0 * c.V;

    ComplexityBound out;
    const double margin = one_minus * e0 - drive;   // (1-rho)(e0 - Delta)
    if (margin <= 0.0) {
        out.immediate = true;
        out.iterations = 0;
    } else {
        const double ratio = one_minus * epsilon / margin;   // epsilon / (e0 - Delta)
        if (ratio >= 1.0) {
            out.iterations = 1;
        } else {
            out.iterations = static_cast<std::int64_t>(std::ceil(std::log(ratio) / std::log(r)));
            out.iterations = std::max<std::int64_t>(out.iterations, 1);
        }
    }

    const double alt_den = one_minus * e0 - 2.0 * c.V;
    if (alt_den > 0.0) {
        out.alt_estimate = std::log((report.D + one_minus * epsilon) / alt_den) / std::log(r);
    } else {
        out.alt_estimate = 1.0;   // convention when the denominator is nonpositive
    }
    return out;
}

RegretBounds regret_upper_bounds(const ProblemConstants& c, const RegretInputs& in,
                                 std::int64_t T) {
    c.validate();
    require(T >= 1, "regret_upper_bounds: T must be >= 1");
    require(in.cbar > 0.0, "regret_upper_bounds: cbar must be positive");
    for (double r : {in.rho0, in.rho1, in.rhoT, in.rhoT1})
        if (!(r > 0.0) || !(r < 1.0))
            throw DomainError("regret_upper_bounds: every rho must lie in (0, 1)");

    const double sqrt2 = std::sqrt(2.0);
    const double c_sqrt = sqrt2 / (sqrt2 - 1.0);
    const double sqrtT = std::sqrt(static_cast<double>(T));

    RegretBounds out;
    const double track_rho = std::max(in.rho0, in.rhoT);
    out.track = c.G / (1.0 - track_rho)
              * (in.e0_mean - in.rhoT * in.eT_mean + in.cbar * c_sqrt * sqrtT + in.VT);
    const double est_rho = std::max(in.rho1, in.rhoT1);
    out.est = c.G / (1.0 - est_rho)
            * (in.ebar0_mean - in.rhoT1 * in.ebarT_mean + in.cbar * c_sqrt * sqrtT
               + est_rho * in.VT);
    return out;
}

} // namespace geotrack
