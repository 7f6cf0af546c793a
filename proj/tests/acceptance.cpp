// Acceptance suite: runs every gate criterion end to end at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code 0 only if
// every criterion holds. Individual criteria can be selected by number on the
// command line (e.g. "./geotrack_acceptance 1 5 9").

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geotrack/csv.hpp"
#include "geotrack/euclidean.hpp"
#include "geotrack/karcher.hpp"

using namespace geotrack;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

ProblemConstants study_constants(int d) {
    ProblemConstants c;
    c.L = 1.5;
    c.sigma = 1.0;
    c.delta = 0.001;
    c.V = 0.5;
    c.d = d;
    c.R = 1.0;
    c.kappa = kappa_for_zeta(1.5, c.R);
    c.G = 10.0;
    return c;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// --- criterion 1: optimal oracle precision regression -----------------------

Outcome criterion_eta() {
    const double eta3 = optimal_eta(study_constants(6));
    const double eta9 = optimal_eta(study_constants(45));
    const bool ok = std::abs(eta3 - 0.0089) <= 2e-4 && std::abs(eta9 - 0.005) <= 1e-4;
    return {ok, "eta_bar(d=6) = " + num(eta3) + " (target 0.0089 +- 2e-4), eta_bar(d=45) = "
                    + num(eta9) + " (target 0.005 +- 1e-4)"};
}

// --- criterion 2: tracking-limit regression ---------------------------------

Outcome criterion_delta() {
    const double d3 = delta_bound(study_constants(6), 0.0074, 0.0089).Delta;
    const double d9 = delta_bound(study_constants(45), 0.0015, 0.005).Delta;
    const double r3 = std::abs(d3 - 543.73) / 543.73;
    const double r9 = std::abs(d9 - 2666.0) / 2666.0;
    const bool ok = r3 < 0.005 && r9 < 0.005;
    return {ok, "Delta(d=6) = " + num(d3) + " (543.73 +- 0.5%), Delta(d=45) = " + num(d9)
                    + " (2666 +- 0.5%)"};
}

// --- criterion 3: optimal step-size regression + grid dominance -------------

Outcome criterion_alpha() {
    const ProblemConstants c3 = study_constants(6);
    const ProblemConstants c9 = study_constants(45);
    const OptimalAlpha a3 = optimal_alpha(c3);
    const OptimalAlpha a9 = optimal_alpha(c9);
    bool ok = std::abs(a3.value - 0.0074) / 0.0074 <= 0.05
           && std::abs(a9.value - 0.0015) / 0.0015 <= 0.05 && !a3.grid_fallback
           && !a9.grid_fallback;

    // brute-force oracle: 1e4 admissible grid points cannot beat the root
    const double eta3 = optimal_eta(c3);
    const double at_root = delta_bound(c3, a3.value, eta3).Delta;
    const double amax = alpha_max(c3);
    double grid_min = 1e300;
    for (int i = 1; i <= 10000; ++i)
        grid_min = std::min(grid_min, delta_bound(c3, amax * i / 10001.0, eta3).Delta);
    ok = ok && at_root <= grid_min + 1e-9;
    return {ok, "alpha_bar(d=6) = " + num(a3.value) + ", alpha_bar(d=45) = " + num(a9.value)
                    + ", Delta at root " + num(at_root) + " <= grid min " + num(grid_min)};
}

// --- criterion 4: oracle-bound Monte-Carlo certification --------------------

TimeVaryingObjective shifted_quadratic(const EuclideanManifold& m, double L, double delta,
                                       double shift) {
    ProblemConstants c;
    c.L = L;
    c.sigma = L;
    c.delta = delta;
    c.V = 0.0;
    c.kappa = 0.0;
    c.R = 100.0;
    c.d = m.intrinsic_dim();
    c.G = 1e6;
    auto eval = [shift, L](TimeIndex t, const ManifoldPoint& p) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(p.coords.size());
        if (t.half_steps % 2 == 1) a[0] = shift;
        return 0.5 * L * (p.coords - a).squaredNorm();
    };
    auto grad = [shift, L](TimeIndex t, const ManifoldPoint& p) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(p.coords.size());
        if (t.half_steps % 2 == 1) a[0] = shift;
        return TangentVector{p, L * (p.coords - a)};
    };
    return TimeVaryingObjective(eval, c, grad);
}

Outcome criterion_oracle_bounds() {
    const std::size_t samples = 100000;
    RandomStream rng(20240);
    bool ok = true;
    std::string detail;

    for (const int d : {2, 6}) {
        const EuclideanManifold m(d);
        for (const double delta : {0.0, 0.001}) {
            ProblemConstants probe = study_constants(d);
            probe.delta = std::max(delta, 1e-9);
            const double eta_bar = optimal_eta(probe);
            for (const double eta : {delta > 0.0 ? eta_bar : 1e-3, 0.1}) {
                Eigen::VectorXd xv = Eigen::VectorXd::Zero(d);
                xv[0] = 1.0;
                const double shift =
                    delta > 0.0 ? delta / (std::abs(xv[0]) + 8.0 * eta + 1.0) : 0.0;
                const TimeVaryingObjective f = shifted_quadratic(m, 1.5, delta, shift);
                RandomStream cell = rng.substream(
                    static_cast<std::uint64_t>(d * 100 + (delta > 0.0) * 10 + (eta > 0.05)));
                const DiagnosticReport rep =
                    verify_oracle_bounds(m, f, TimeIndex{0}, ManifoldPoint{xv}, eta, samples,
                                         cell);
                if (!rep.pass()) {
                    ok = false;
                    detail += " FAIL cell(d=" + std::to_string(d) + ", delta=" + num(delta)
                            + ", eta=" + num(eta) + ")";
                }
            }
        }
    }

    // negative control: quadratic with Hessian L I at its minimizer, where the
    // second-moment bound is within 2x of the truth, so halving L must fail
    {
        const int d = 30;
        const EuclideanManifold m(d);
        const TimeVaryingObjective f = shifted_quadratic(m, 1.5, 0.0, 0.0);
        RandomStream cell = rng.substream(777);
        const DiagnosticReport rep = verify_oracle_bounds(
            m, f, TimeIndex{0}, ManifoldPoint{Eigen::VectorXd::Zero(d)}, 0.01, samples, cell,
            2.0);
        if (rep.pass()) {
            ok = false;
            detail += " negative control failed to FAIL";
        } else {
            detail += " negative control FAILs as required (E|g|^2 = "
                    + num(rep.second_moment_estimate) + " > understated bound "
                    + num(rep.second_moment_limit) + ")";
        }
    }
    return {ok, "8 PASS cells at 1e5 samples;" + detail};
}

// --- criterion 5: geometry suite on SPD(3) ----------------------------------

Outcome criterion_geometry() {
    const SpdManifold m(3, -0.5);
    RandomStream rng(555);
    const ManifoldPoint eye{m.to_coords(Eigen::MatrixXd::Identity(3, 3))};

    auto random_pt = [&](const ManifoldPoint& at, double spread) {
        TangentVector u = m.sample_tangent_gaussian(at, rng);
        return m.exp(at, scaled(u, rng.uniform(0.05, spread) / m.norm(at, u)));
    };

    int bad_roundtrip = 0, bad_isometry = 0, bad_projection = 0, bad_triangle = 0;
    for (int i = 0; i < 2000; ++i) {
        const ManifoldPoint a = random_pt(eye, 1.5);
        const ManifoldPoint b = random_pt(a, 1.5);
        const double dist = m.distance(a, b);
        if (m.distance(m.exp(a, m.log(a, b)), b) > 1e-8 * (1.0 + dist)) ++bad_roundtrip;

        const TangentVector u = m.sample_tangent_gaussian(a, rng);
        const TangentVector v = m.sample_tangent_gaussian(a, rng);
        const double before = m.inner(a, u, v);
        const double after = m.inner(b, m.transport(a, b, u), m.transport(a, b, v));
        if (std::abs(after - before) > 1e-8 * (1.0 + std::abs(before))) ++bad_isometry;

        const GeodesicBall ball{a, rng.uniform(0.2, 1.0)};
        const ManifoldPoint p = random_pt(eye, 2.0);
        const ManifoldPoint q = random_pt(eye, 2.0);
        const ManifoldPoint pp = project_ball(m, ball, p);
        const ManifoldPoint pq = project_ball(m, ball, q);
        if (m.distance(pp, pq) > m.distance(p, q) + 1e-8) ++bad_projection;
        if (m.distance(project_ball(m, ball, pp), pp) > 1e-9) ++bad_projection;
    }
    for (int i = 0; i < 10000; ++i) {
        const ManifoldPoint x = random_pt(eye, 1.5);
        const ManifoldPoint y = random_pt(x, 1.5);
        const ManifoldPoint z = random_pt(x, 1.5);
        const double a = m.distance(y, z);
        const double b = m.distance(x, y);
        const double c = m.distance(x, z);
        if (b < 1e-8 || c < 1e-8) continue;
        const double cos_a = m.inner(x, m.log(x, y), m.log(x, z)) / (b * c);
        if (a * a > zeta(-0.5, c) * b * b + c * c - 2.0 * b * c * cos_a + 1e-6) ++bad_triangle;
    }
    const bool ok = bad_roundtrip == 0 && bad_isometry == 0 && bad_projection == 0
                 && bad_triangle == 0;
    return {ok, "roundtrip " + std::to_string(bad_roundtrip) + ", isometry "
                    + std::to_string(bad_isometry) + ", projection "
                    + std::to_string(bad_projection) + ", triangle "
                    + std::to_string(bad_triangle) + " violations (1e4 triangles)"};
}

// --- criterion 6: desk-scale tracking study ---------------------------------

double tail_mean(const std::vector<double>& v) {
    const std::size_t from = v.size() - std::max<std::size_t>(v.size() / 10, 1);
    double acc = 0.0;
    for (std::size_t i = from; i < v.size(); ++i) acc += v[i];
    return acc / static_cast<double>(v.size() - from);
}

Outcome criterion_tracking_study() {
    const ProblemConstants c = study_constants(6);
    const SpdManifold m(3, c.kappa);
    KarcherInstance inst;
    inst.m = 3;
    inst.N = 10;
    inst.horizon = 2000;
    inst.drift = DriftKind::ConstantSpeed;
    inst.seed = 61;

    RandomStream master(inst.seed);
    RandomStream cal = master.substream(1001);
    inst.omega = calibrate_omega(m, inst, kCalibrationSafety * c.delta, 300, cal);

    const StepSchedule schedule = make_optimal_schedule(c);
    const StudyResult study = averaged_study(m, inst, c, schedule, 20, master, true);

    const double zo_tail = tail_mean(study.zeroth.e_mean);
    const double fo_tail = tail_mean(study.first.e_mean);
    const double delta_cap = delta_bound(c, 0.0074, 0.0089).Delta;

    const bool finite = std::isfinite(zo_tail) && std::isfinite(fo_tail);
    const bool dominated = zo_tail < delta_cap;
    const bool ordered = fo_tail < zo_tail;
    const bool certified = study.zeroth.flagged_runs == 0 && study.zeroth.v_hat_max <= c.V
                        && study.zeroth.delta_hat_max <= c.delta * (1.0 + 1e-9);
    const bool ok = finite && dominated && ordered && certified;
    return {ok, "zeroth tail " + num(zo_tail) + " < Delta " + num(delta_cap) + "; first tail "
                    + num(fo_tail) + " < zeroth; delta_hat " + num(study.zeroth.delta_hat_max)
                    + ", V_hat " + num(study.zeroth.v_hat_max) + ", flagged "
                    + std::to_string(study.zeroth.flagged_runs)};
}

// --- criterion 7: regret study with the doubling schedule -------------------

Outcome criterion_regret_study() {
    const ProblemConstants c = study_constants(6);
    const SpdManifold m(3, c.kappa);
    KarcherInstance inst;
    inst.m = 3;
    inst.N = 10;
    inst.horizon = 2000;
    inst.drift = DriftKind::DecayingSpeed;
    inst.seed = 71;

    RandomStream master(inst.seed);
    RandomStream cal = master.substream(1001);
    inst.omega = calibrate_omega(m, inst, kCalibrationSafety * c.delta, 300, cal);

    const double cbar = 1.0;
    const StepSchedule schedule = make_doubling_schedule(c, cbar);
    const StudyResult study = averaged_study(m, inst, c, schedule, 5, master, false);

    bool ok = true;
    std::string detail;
    double prev_rate = 1e300;
    for (const std::int64_t T : {std::int64_t{250}, std::int64_t{500}, std::int64_t{1000},
                                 std::int64_t{2000}}) {
        const double reg = study.zeroth.reg_track_mean[T];
        const double rate = reg / static_cast<double>(T);
        if (rate >= prev_rate) {
            ok = false;
            detail += " Reg/T not decreasing at T=" + std::to_string(T);
        }
        prev_rate = rate;

        RegretInputs in;
        in.rho0 = rho(c, schedule.params_at(0).alpha);
        in.rho1 = rho(c, schedule.params_at(1).alpha);
        in.rhoT = rho(c, schedule.params_at(T).alpha);
        in.rhoT1 = rho(c, schedule.params_at(T + 1).alpha);
        in.cbar = cbar;
        in.e0_mean = study.zeroth.e_mean[0];
        in.eT_mean = study.zeroth.e_mean[T];
        in.ebar0_mean = study.zeroth.ebar_mean[0];
        in.ebarT_mean = study.zeroth.ebar_mean[T - 1];
        in.VT = study.zeroth.vt_cum_mean[T];
        const RegretBounds rb = regret_upper_bounds(c, in, T);
        if (!(reg <= rb.track)) {
            ok = false;
            detail += " bound violated at T=" + std::to_string(T);
        }
        detail += " [T=" + std::to_string(T) + ": Reg/T=" + num(rate) + ", bound "
                + num(rb.track) + "]";
    }
    // decaying drift must show sublinear path variation
    const double vt_rate_early = study.zeroth.vt_cum_mean[250] / 250.0;
    const double vt_rate_late = study.zeroth.vt_cum_mean[2000] / 2000.0;
    if (!(vt_rate_late < vt_rate_early)) {
        ok = false;
        detail += " V_T/T not decaying";
    }
    return {ok, detail};
}

// --- criterion 8: doubling-schedule feasibility -----------------------------

Outcome criterion_schedule_feasibility() {
    RandomStream rng(808);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        ProblemConstants c;
        c.sigma = rng.uniform(0.2, 2.0);
        c.L = c.sigma * rng.uniform(1.0, 4.0);
        c.delta = rng.uniform(1e-5, 1e-2);
        c.V = rng.uniform(0.0, 1.0);
        c.R = rng.uniform(0.5, 5.0);
        c.kappa = -rng.uniform(0.0, 2.0);
        c.d = 1 + static_cast<int>(rng.uniform_index(60));
        c.G = 1.0;
        const double cbar = rng.uniform(0.3, 3.0);
        const StepSchedule s = make_doubling_schedule(c, cbar, 12);
        for (int m_exp = 0; m_exp <= 12; ++m_exp) {
            const AlgorithmParams p = s.period_params()[m_exp];
            const double tk = std::pow(2.0, m_exp);
            if (!(schedule_drive(c, p) <= cbar / std::sqrt(tk) + 1e-12))
                return {false, "drive bound violated (draw " + std::to_string(trial) + ", m="
                                   + std::to_string(m_exp) + ")"};
            if (!(rho(c, p.alpha) < 1.0))
                return {false, "rho >= 1 (draw " + std::to_string(trial) + ")"};
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " period checks over 100 random constant draws"};
}

// --- criterion 9: bound self-consistency ------------------------------------

Outcome criterion_self_consistency() {
    RandomStream rng(909);
    for (int trial = 0; trial < 1000; ++trial) {
        ProblemConstants c;
        c.sigma = rng.uniform(0.2, 2.0);
        c.L = c.sigma * rng.uniform(1.0, 4.0);
        c.delta = rng.uniform(0.0, 0.01);
        c.V = rng.uniform(0.0, 1.0);
        c.R = rng.uniform(0.5, 5.0);
        c.kappa = -rng.uniform(0.0, 2.0);
        c.d = 1 + static_cast<int>(rng.uniform_index(60));
        c.G = 1.0;
        const double alpha = alpha_max(c) * rng.uniform(0.02, 0.98);
        const double eta = rng.uniform(1e-3, 0.5);
        const BoundReport r = delta_bound(c, alpha, eta);
        if (!(r.theta2 > r.theta1))
            return {false, "theta2 <= theta1 on draw " + std::to_string(trial)};
        if (!(2.0 * r.rho > std::sqrt(2.0)))
            return {false, "2 rho <= sqrt(2) on draw " + std::to_string(trial)};
    }
    RandomStream rng2(910);
    for (int trial = 0; trial < 1000; ++trial) {
        ProblemConstants c;
        c.sigma = rng2.uniform(0.2, 2.0);
        c.L = c.sigma * rng2.uniform(1.0, 4.0);
        c.delta = rng2.uniform(0.0, 0.01);
        c.V = rng2.uniform(0.0, 0.5);
        c.R = rng2.uniform(0.5, 5.0);
        c.kappa = -rng2.uniform(0.0, 2.0);
        c.d = 1 + static_cast<int>(rng2.uniform_index(30));
        c.G = 1.0;
        const double alpha = alpha_max(c) * rng2.uniform(0.2, 0.9);
        const double eta = rng2.uniform(0.01, 0.3);
        const BoundReport r = delta_bound(c, alpha, eta);
        if (r.rho > 0.995) continue;
        const double e0 = r.Delta + rng2.uniform(0.5, 5.0);
        const double eps = rng2.uniform(0.01, 0.3);
        const ComplexityBound k = complexity_K(c, r, e0, eps);
        double e = e0;
        std::int64_t steps = 0;
        while (e > r.Delta + eps && steps < 1000000) {
            e = r.rho * e + r.D + 2.0 * c.V;
            ++steps;
        }
        if (k.immediate || k.iterations != steps)
            return {false, "complexity mismatch on draw " + std::to_string(trial) + ": closed "
                               + std::to_string(k.iterations) + " vs recursion "
                               + std::to_string(steps)};
    }
    return {true, "theta2 > theta1 and 2 rho > sqrt(2) on 1000 draws; complexity_K matches "
                  "recursion on 1000 draws"};
}

// --- criterion 10: byte-identical CSV determinism ---------------------------

std::string run_study_to_csv(const std::filesystem::path& dir) {
    const ProblemConstants c = study_constants(6);
    const SpdManifold m(3, c.kappa);
    KarcherInstance inst;
    inst.m = 3;
    inst.N = 10;
    inst.horizon = 60;
    inst.drift = DriftKind::ConstantSpeed;
    inst.seed = 99;
    RandomStream master(inst.seed);
    RandomStream cal = master.substream(1001);
    inst.omega = calibrate_omega(m, inst, kCalibrationSafety * c.delta, 100, cal);
    const StudyResult study =
        averaged_study(m, inst, c, make_optimal_schedule(c), 3, master, true);
    std::filesystem::create_directories(dir);
    const std::string zo = (dir / "zeroth_order.csv").string();
    write_arm_csv(zo, study, study.zeroth);
    write_arm_csv((dir / "first_order.csv").string(), study, study.first);
    return zo;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome criterion_determinism() {
    const auto base = std::filesystem::temp_directory_path() / "geotrack_acceptance";
    const std::string a = run_study_to_csv(base / "a");
    const std::string b = run_study_to_csv(base / "b");
    const std::string bytes_a = slurp(a);
    const std::string bytes_b = slurp(b);
    const bool ok = !bytes_a.empty() && bytes_a == bytes_b
                 && slurp((base / "a" / "first_order.csv").string())
                        == slurp((base / "b" / "first_order.csv").string());
    return {ok, ok ? "two invocations, byte-identical zeroth/first-order CSVs ("
                         + std::to_string(bytes_a.size()) + " bytes)"
                   : "CSV bytes differ between invocations"};
}

} // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "optimal oracle precision regression", criterion_eta},
        {2, "tracking-limit regression", criterion_delta},
        {3, "optimal step-size regression + grid dominance", criterion_alpha},
        {4, "oracle-bound Monte-Carlo certification", criterion_oracle_bounds},
        {5, "geometry suite on SPD(3)", criterion_geometry},
        {6, "Karcher tracking study (m=3, T=2000, 20 runs)", criterion_tracking_study},
        {7, "regret study (doubling schedule, decaying drift)", criterion_regret_study},
        {8, "doubling-schedule feasibility", criterion_schedule_feasibility},
        {9, "bound self-consistency", criterion_self_consistency},
        {10, "CSV determinism", criterion_determinism},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    bool all_ok = true;
    for (const auto& criterion : criteria) {
        if (!selected.empty() && !selected.count(criterion.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criterion.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s  (%.1fs) %s\n", out.pass ? "PASS" : "FAIL",
                    criterion.id, criterion.name, secs, out.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && out.pass;
    }
    return all_ok ? 0 : 1;
}
