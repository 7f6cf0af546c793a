// geotrack: online zeroth-order optimization on Hadamard manifolds.
//
// Subcommands:
//   params  - optimal oracle precision / step size and the tracking limit
//   bounds  - full bound report for a given (alpha, eta)
//   run     - time-varying Karcher-mean study on SPD(m), CSV per arm
//   verify  - geometry and oracle-bound verification suites
//   plot    - log-scale error curves from run CSVs as a standalone SVG
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 I/O error, 4 data error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geotrack/csv.hpp"
#include "geotrack/euclidean.hpp"
#include "geotrack/karcher.hpp"

namespace gt = geotrack;

namespace {

// ---------------------------------------------------------------------------
// settings: config file values overridden by command-line flags
// ---------------------------------------------------------------------------

class Settings {
public:
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw gt::ConfigError("cannot open config file: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trimmed = trim(line);
            if (trimmed.empty()) continue;
            if (trimmed.front() == '[' && trimmed.back() == ']') continue;   // flat sections
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw gt::ConfigError(path + ":" + std::to_string(lineno)
                                      + ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty() || value.empty())
                throw gt::ConfigError(path + ":" + std::to_string(lineno)
                                      + ": empty key or value");
            file_[key] = value;
        }
    }

    void set_flag(const std::string& key, const std::string& value) { flags_[key] = value; }
    bool has(const std::string& key) const { return flags_.count(key) || file_.count(key); }

    std::string text(const std::string& key, const std::string& fallback) const {
        if (auto it = flags_.find(key); it != flags_.end()) return it->second;
        if (auto it = file_.find(key); it != file_.end()) return it->second;
        return fallback;
    }

    double number(const std::string& key, double fallback) const {
        const std::string raw = text(key, "");
        if (raw.empty()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw gt::ConfigError("not a number for '" + key + "': " + raw);
        }
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        const std::string raw = text(key, "");
        if (raw.empty()) return fallback;
        try {
            std::size_t used = 0;
            const std::int64_t v = std::stoll(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw gt::ConfigError("not an integer for '" + key + "': " + raw);
        }
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> file_;
    std::map<std::string, std::string> flags_;
};

// Registers the shared constant/config flags on a subcommand, all funneled
// into Settings so that flags win over the config file.
void add_common_flags(CLI::App* cmd, std::shared_ptr<Settings> s,
                      std::shared_ptr<std::string> config_path) {
    cmd->add_option_function<std::string>(
           "--config", [config_path](const std::string& v) { *config_path = v; },
           "key = value configuration file");
    for (const char* key : {"L", "sigma", "delta", "V", "kappa", "R", "cbar", "zeta", "G",
                            "alpha", "eta", "omega", "lambda_min", "lambda_max"}) {
        const std::string name = std::string("--") + key;
        cmd->add_option_function<double>(
            name,
            [s, key = std::string(key)](double v) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.17g", v);   // keep full precision
                s->set_flag(key, buf);
            },
            "");
    }
    for (const char* key : {"seed", "runs", "m", "N", "T", "d", "probes", "samples", "trials"}) {
        const std::string name = std::string("--") + key;
        cmd->add_option_function<std::int64_t>(
            name,
            [s, key = std::string(key)](std::int64_t v) { s->set_flag(key, std::to_string(v)); },
            "");
    }
    for (const char* key : {"schedule", "manifold", "drift", "out"}) {
        const std::string name = std::string("--") + key;
        cmd->add_option_function<std::string>(
            name, [s, key = std::string(key)](const std::string& v) { s->set_flag(key, v); }, "");
    }
}

int dimension_from(const Settings& s) {
    if (s.has("d")) return static_cast<int>(s.integer("d", 6));
    const int m = static_cast<int>(s.integer("m", 3));
    return m * (m + 1) / 2;
}

gt::ProblemConstants constants_from(const Settings& s) {
    gt::ProblemConstants c;
    c.L = s.number("L", 1.5);
    c.sigma = s.number("sigma", 1.0);
    c.delta = s.number("delta", 0.001);
    c.V = s.number("V", 0.5);
    c.R = s.number("R", 1.0);
    c.d = dimension_from(s);
    c.G = s.number("G", 10.0);
    if (s.has("kappa")) {
        c.kappa = s.number("kappa", 0.0);
    } else {
        c.kappa = gt::kappa_for_zeta(s.number("zeta", 1.5), c.R);
    }
    try {
        c.validate();
    } catch (const gt::ContractViolation& e) {
        throw gt::ConfigError(e.what());
    }
    return c;
}

std::string fmt(double v) { return gt::csv_number(v); }

// ---------------------------------------------------------------------------
// CSV reading (plot input)
// ---------------------------------------------------------------------------

struct CsvSeries {
    std::string label;
    std::vector<double> k;
    std::vector<double> e_mean;
};

CsvSeries read_run_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gt::DataError("cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line != gt::kRunCsvHeader)
        throw gt::DataError(path + ": missing or wrong header");
    CsvSeries s;
    s.label = std::filesystem::path(path).stem().string();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t used = 0;
                cells.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw gt::DataError(path + ": bad numeric cell '" + cell + "'");
            }
        }
        if (cells.size() != 9) throw gt::DataError(path + ": expected 9 columns");
        s.k.push_back(cells[0]);
        s.e_mean.push_back(cells[1]);
    }
    if (s.k.empty()) throw gt::DataError(path + ": no data rows");
    return s;
}

// ---------------------------------------------------------------------------
// SVG plot (static, no external renderer)
// ---------------------------------------------------------------------------

void write_svg(const std::string& path, const std::vector<CsvSeries>& series) {
    const int width = 960, height = 600;
    const double ml = 70, mr = 30, mt = 30, mb = 50;
    double kmax = 1.0, lo = 1e300, hi = -1e300;
    for (const auto& s : series) {
        kmax = std::max(kmax, s.k.back());
        for (double v : s.e_mean) {
            const double clipped = std::max(v, 1e-16);
            lo = std::min(lo, clipped);
            hi = std::max(hi, clipped);
        }
    }
    double ylo = std::floor(std::log10(lo));
    double yhi = std::ceil(std::log10(hi));
    if (yhi <= ylo) yhi = ylo + 1.0;

    auto xpix = [&](double k) { return ml + (width - ml - mr) * (k / kmax); };
    auto ypix = [&](double v) {
        const double t = (std::log10(std::max(v, 1e-16)) - ylo) / (yhi - ylo);
        return height - mb - (height - mt - mb) * t;
    };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw gt::IoError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double k = kmax * i / 4.0;
        out << "<text x=\"" << xpix(k) << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\">" << fmt(std::round(k)) << "</text>\n";
    }
    for (double p = ylo; p <= yhi + 0.5; p += 1.0) {
        out << "<line x1=\"" << ml << "\" y1=\"" << ypix(std::pow(10.0, p)) << "\" x2=\""
            << width - mr << "\" y2=\"" << ypix(std::pow(10.0, p))
            << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << ypix(std::pow(10.0, p)) + 4
            << "\" text-anchor=\"end\">1e" << fmt(p) << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">iteration k</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + height - mb) / 2
        << ")\">average tracking error</text>\n";
    // series
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < s.k.size(); ++j)
            out << xpix(s.k[j]) << ',' << ypix(s.e_mean[j]) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 18 + 18 * i
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.label << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    if (!out) throw gt::IoError("write failure on " + path);
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_params(const Settings& s) {
    const gt::ProblemConstants c = constants_from(s);
    std::cout << "d = " << c.d << ", L = " << fmt(c.L) << ", sigma = " << fmt(c.sigma)
              << ", delta = " << fmt(c.delta) << ", V = " << fmt(c.V)
              << ", zeta(kappa,R) = " << fmt(gt::zeta(c.kappa, c.R)) << "\n";
    std::cout << "admissible alpha interval: (0, " << fmt(gt::alpha_max(c)) << ")\n";
    if (c.delta == 0.0) {
        std::cout << "delta = 0: eta_bar is degenerate (any freely small eta works); "
                     "no optimal pair to report\n";
        return 0;
    }
    const double eta_bar = gt::optimal_eta(c);
    const gt::OptimalAlpha alpha_bar = gt::optimal_alpha(c);
    std::cout << "eta_bar   = " << fmt(eta_bar) << "\n";
    std::cout << "alpha_bar = " << fmt(alpha_bar.value)
              << (alpha_bar.grid_fallback ? "  (grid fallback: no admissible quadratic root)"
                                          : "")
              << "\n";
    const gt::BoundReport rep = gt::delta_bound(c, alpha_bar.value, eta_bar);
    std::cout << "Delta(alpha_bar, eta_bar) = " << fmt(rep.Delta) << "\n";
    return 0;
}

int cmd_bounds(const Settings& s) {
    const gt::ProblemConstants c = constants_from(s);
    if (!s.has("alpha") || !s.has("eta"))
        throw gt::ConfigError("bounds: --alpha and --eta are required");
    const double alpha = s.number("alpha", 0.0);
    const double eta = s.number("eta", 0.0);
    gt::BoundReport rep;
    try {
        rep = gt::delta_bound(c, alpha, eta);
    } catch (const gt::DomainError& e) {
        throw gt::ConfigError(e.what());
    }
    std::cout << "zeta(kappa,R) = " << fmt(rep.zeta_R) << "\n"
              << "rho           = " << fmt(rep.rho) << "\n"
              << "theta1        = " << fmt(rep.theta1) << "\n"
              << "theta2        = " << fmt(rep.theta2) << "\n";
    if (rep.theta_bar) std::cout << "theta_bar     = " << fmt(*rep.theta_bar) << "\n";
    std::cout << "D             = " << fmt(rep.D) << "\n"
              << "Delta         = " << fmt(rep.Delta) << "\n";
    if (s.has("e0") || s.has("epsilon")) {
        const double e0 = s.number("e0", 1.0);
        const double eps = s.number("epsilon", 0.01);
        const gt::ComplexityBound k = gt::complexity_K(c, rep, e0, eps);
        if (k.immediate)
            std::cout << "K(e0=" << fmt(e0) << ", eps=" << fmt(eps) << ") = immediate\n";
        else
            std::cout << "K(e0=" << fmt(e0) << ", eps=" << fmt(eps) << ") = " << k.iterations
                      << "  (alternative closed form: " << fmt(k.alt_estimate) << ")\n";
    }
    return 0;
}

int cmd_run(const Settings& s) {
    if (s.text("manifold", "spd") != "spd")
        throw gt::ConfigError("run: the tracking study is defined on the spd manifold");
    const gt::ProblemConstants c = constants_from(s);

    gt::KarcherInstance inst;
    inst.m = static_cast<int>(s.integer("m", 3));
    inst.N = static_cast<int>(s.integer("N", 10));
    inst.horizon = s.integer("T", 500);
    inst.seed = static_cast<std::uint64_t>(s.integer("seed", 1));
    inst.lambda_min = s.number("lambda_min", 0.5);
    inst.lambda_max = s.number("lambda_max", 2.0);
    const std::string drift = s.text("drift", "constant_speed");
    if (drift == "constant_speed") inst.drift = gt::DriftKind::ConstantSpeed;
    else if (drift == "decaying_speed") inst.drift = gt::DriftKind::DecayingSpeed;
    else throw gt::ConfigError("run: unknown drift '" + drift + "'");
    if (c.d != inst.m * (inst.m + 1) / 2)
        throw gt::ConfigError("run: d must equal m(m+1)/2 for the spd study");

    const gt::SpdManifold manifold(inst.m, c.kappa);
    gt::RandomStream master(inst.seed);

    inst.omega = s.number("omega", 0.0);
    if (inst.omega == 0.0 && c.delta > 0.0) {
        gt::RandomStream cal_rng = master.substream(0xca11b);
        inst.omega = gt::calibrate_omega(manifold, inst, gt::kCalibrationSafety * c.delta,
                                         static_cast<int>(s.integer("probes", 300)), cal_rng);
        std::cout << "calibrated omega = " << fmt(inst.omega) << " for delta = " << fmt(c.delta)
                  << "\n";
    }

    const std::string schedule_kind = s.text("schedule", "optimal");
    std::optional<gt::StepSchedule> schedule;
    if (schedule_kind == "optimal") {
        schedule = gt::make_optimal_schedule(c);
    } else if (schedule_kind == "constant") {
        if (!s.has("alpha") || !s.has("eta"))
            throw gt::ConfigError("run: constant schedule needs --alpha and --eta");
        schedule = gt::make_constant_schedule(s.number("alpha", 0.0), s.number("eta", 0.0));
    } else if (schedule_kind == "doubling") {
        schedule = gt::make_doubling_schedule(c, s.number("cbar", 1.0));
    } else {
        throw gt::ConfigError("run: unknown schedule '" + schedule_kind + "'");
    }

    const int runs = static_cast<int>(s.integer("runs", 10));
    const gt::StudyResult study =
        gt::averaged_study(manifold, inst, c, *schedule, runs, master, true);

    const std::filesystem::path out_dir(s.text("out", "."));
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::string zo_path = (out_dir / "zeroth_order.csv").string();
    const std::string fo_path = (out_dir / "first_order.csv").string();
    write_arm_csv(zo_path, study, study.zeroth);
    write_arm_csv(fo_path, study, study.first);

    auto tail_mean = [](const std::vector<double>& v) {
        const std::size_t from = v.size() - std::max<std::size_t>(v.size() / 10, 1);
        double acc = 0.0;
        for (std::size_t i = from; i < v.size(); ++i) acc += v[i];
        return acc / static_cast<double>(v.size() - from);
    };
    const double zo_tail = tail_mean(study.zeroth.e_mean);
    const double fo_tail = tail_mean(study.first.e_mean);
    std::cout << "wrote " << zo_path << " and " << fo_path << "\n";
    std::cout << "tail mean e (zeroth order) = " << fmt(zo_tail) << "\n";
    std::cout << "tail mean e (first order)  = " << fmt(fo_tail) << "\n";
    if (schedule->kind() != gt::StepSchedule::Kind::DoublingRegret) {
        const gt::AlgorithmParams p = schedule->params_at(0);
        const gt::BoundReport rep = gt::delta_bound(c, p.alpha, p.eta);
        std::cout << "Delta bound = " << fmt(rep.Delta) << "  ("
                  << (zo_tail <= rep.Delta ? "tail below Delta" : "TAIL ABOVE DELTA") << ")\n";
    } else {
        const std::int64_t T = study.T;
        gt::RegretInputs in;
        in.rho0 = gt::rho(c, study.alpha_k[0]);
        in.rho1 = gt::rho(c, study.alpha_k[1]);
        in.rhoT = gt::rho(c, study.alpha_k[T]);
        in.rhoT1 = gt::rho(c, schedule->params_at(T + 1).alpha);
        in.cbar = s.number("cbar", 1.0);
        in.e0_mean = study.zeroth.e_mean[0];
        in.eT_mean = study.zeroth.e_mean[T];
        in.ebar0_mean = study.zeroth.ebar_mean[0];
        in.ebarT_mean = study.zeroth.ebar_mean[T - 1];
        in.VT = study.zeroth.vt_cum_mean[T];
        const gt::RegretBounds rb = gt::regret_upper_bounds(c, in, T);
        std::cout << "measured Reg_T^track = " << fmt(study.zeroth.reg_track_mean[T])
                  << ", bound = " << fmt(rb.track) << "\n";
        std::cout << "measured Reg_T^est   = " << fmt(study.zeroth.reg_est_mean[T - 1])
                  << ", bound = " << fmt(rb.est) << "\n";
    }
    std::cout << "delta_hat = " << fmt(study.zeroth.delta_hat_max)
              << ", V_hat = " << fmt(study.zeroth.v_hat_max)
              << ", flagged runs = " << study.zeroth.flagged_runs << "\n";
    return 0;
}

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;
};

int cmd_verify(const Settings& s) {
    const std::string which = s.text("manifold", "both");
    if (which != "euclidean" && which != "spd" && which != "both")
        throw gt::ConfigError("verify: unknown manifold '" + which + "'");
    const int trials = static_cast<int>(s.integer("trials", 2000));
    const std::size_t samples = static_cast<std::size_t>(s.integer("samples", 20000));
    const double understate = s.number("understate-L", 1.0);
    gt::RandomStream rng(static_cast<std::uint64_t>(s.integer("seed", 1)));

    std::vector<SuiteResult> suites;
    const bool do_euclid = which != "spd";
    const bool do_spd = which != "euclidean";

    auto spd_pair = [&](const gt::SpdManifold& m, gt::RandomStream& r, double spread) {
        const gt::ManifoldPoint eye{
            m.to_coords(Eigen::MatrixXd::Identity(m.matrix_size(), m.matrix_size()))};
        gt::TangentVector u = m.sample_tangent_gaussian(eye, r);
        gt::ManifoldPoint a = m.exp(eye, gt::scaled(u, r.uniform(0.0, spread) / m.norm(eye, u)));
        gt::TangentVector v = m.sample_tangent_gaussian(a, r);
        gt::ManifoldPoint b = m.exp(a, gt::scaled(v, r.uniform(0.0, spread) / m.norm(a, v)));
        return std::make_pair(a, b);
    };

    {   // exp/log roundtrip + transport isometry
        const gt::SpdManifold spd(3, -0.5);
        const gt::EuclideanManifold euc(4);
        int bad_roundtrip = 0, bad_isometry = 0;
        for (int i = 0; i < trials; ++i) {
            const gt::Manifold* m = nullptr;
            gt::ManifoldPoint a{Eigen::VectorXd()}, b{Eigen::VectorXd()};
            if (do_spd && (i % 2 == 0 || !do_euclid)) {
                auto [x, y] = spd_pair(spd, rng, 1.5);
                m = &spd; a = x; b = y;
            } else {
                m = &euc;
                Eigen::VectorXd av(4), bv(4);
                for (int j = 0; j < 4; ++j) { av[j] = rng.normal(); bv[j] = rng.normal(); }
                a = gt::ManifoldPoint{av}; b = gt::ManifoldPoint{bv};
            }
            const double dist = m->distance(a, b);
            if (m->distance(m->exp(a, m->log(a, b)), b) > 1e-8 * (1.0 + dist)) ++bad_roundtrip;
            const gt::TangentVector t1 = m->sample_tangent_gaussian(a, rng);
            const gt::TangentVector t2 = m->sample_tangent_gaussian(a, rng);
            const double before = m->inner(a, t1, t2);
            const double after = m->inner(b, m->transport(a, b, t1), m->transport(a, b, t2));
            if (std::abs(after - before) > 1e-8 * (1.0 + std::abs(before))) ++bad_isometry;
        }
        suites.push_back({"exp/log roundtrip", bad_roundtrip == 0,
                          std::to_string(bad_roundtrip) + "/" + std::to_string(trials)
                              + " violations"});
        suites.push_back({"transport isometry", bad_isometry == 0,
                          std::to_string(bad_isometry) + "/" + std::to_string(trials)
                              + " violations"});
    }

    {   // projection nonexpansiveness (+ closed-form check on flat space)
        int bad = 0;
        if (do_euclid) {
            const gt::EuclideanManifold m(3);
            const gt::GeodesicBall ball{gt::ManifoldPoint{Eigen::VectorXd::Zero(3)}, 1.0};
            for (int i = 0; i < trials; ++i) {
                Eigen::VectorXd xv(3), yv(3);
                for (int j = 0; j < 3; ++j) { xv[j] = rng.uniform(-3, 3); yv[j] = rng.uniform(-3, 3); }
                const gt::ManifoldPoint px = gt::project_ball(m, ball, gt::ManifoldPoint{xv});
                const gt::ManifoldPoint py = gt::project_ball(m, ball, gt::ManifoldPoint{yv});
                if (m.distance(px, py) > (xv - yv).norm() + 1e-8) ++bad;
                const Eigen::VectorXd radial = xv.norm() <= 1.0 ? xv : Eigen::VectorXd(xv / xv.norm());
                if ((px.coords - radial).norm() > 1e-10) ++bad;
            }
        }
        if (do_spd) {
            const gt::SpdManifold m(3, -0.5);
            for (int i = 0; i < trials; ++i) {
                auto [x, y] = spd_pair(m, rng, 2.0);
                const gt::GeodesicBall ball{x, rng.uniform(0.2, 1.0)};
                auto [p, q] = spd_pair(m, rng, 2.0);
                const gt::ManifoldPoint pp = gt::project_ball(m, ball, p);
                const gt::ManifoldPoint pq = gt::project_ball(m, ball, q);
                if (m.distance(pp, pq) > m.distance(p, q) + 1e-8) ++bad;
                if (m.distance(gt::project_ball(m, ball, pp), pp) > 1e-9) ++bad;
            }
        }
        suites.push_back({"projection nonexpansive", bad == 0,
                          std::to_string(bad) + " violations"});
    }

    {   // geodesic-triangle law of cosines
        int bad = 0;
        int done = 0;
        if (do_spd) {
            const gt::SpdManifold m(3, -0.5);
            for (int i = 0; i < trials; ++i, ++done) {
                auto [x, y] = spd_pair(m, rng, 1.5);
                auto [x2, z] = spd_pair(m, rng, 1.5);
                const double a = m.distance(y, z);
                const double b = m.distance(x, y);
                const double c = m.distance(x, z);
                if (b < 1e-8 || c < 1e-8) continue;
                const double cos_a = m.inner(x, m.log(x, y), m.log(x, z)) / (b * c);
                if (a * a > gt::zeta(-0.5, c) * b * b + c * c - 2.0 * b * c * cos_a + 1e-6) ++bad;
            }
        }
        if (do_euclid) {
            const gt::EuclideanManifold m(3);
            for (int i = 0; i < trials; ++i, ++done) {
                Eigen::VectorXd xv(3), yv(3), zv(3);
                for (int j = 0; j < 3; ++j) {
                    xv[j] = rng.normal(); yv[j] = rng.normal(); zv[j] = rng.normal();
                }
                const gt::ManifoldPoint x{xv}, y{yv}, z{zv};
                const double a = m.distance(y, z);
                const double b = m.distance(x, y);
                const double c = m.distance(x, z);
                if (b < 1e-8 || c < 1e-8) continue;
                const double cos_a = m.inner(x, m.log(x, y), m.log(x, z)) / (b * c);
                if (a * a > gt::zeta(0.0, c) * b * b + c * c - 2.0 * b * c * cos_a + 1e-6) ++bad;
            }
        }
        suites.push_back({"triangle law of cosines", bad == 0,
                          std::to_string(bad) + "/" + std::to_string(done) + " violations"});
    }

    {   // oracle bound certification (Euclidean quadratics; +3 SE acceptance)
        const struct { int d; double delta; } cells[] = {{2, 0.0}, {2, 0.001}, {6, 0.0}, {6, 0.001}};
        bool all_pass = true;
        std::string detail;
        for (const auto& cell : cells) {
            const gt::EuclideanManifold m(cell.d);
            gt::ProblemConstants c;
            c.L = 1.5; c.sigma = 1.0; c.delta = cell.delta; c.V = 0.0;
            c.kappa = 0.0; c.R = 100.0; c.d = cell.d; c.G = 1e6;
            const double eta_lo = cell.delta > 0.0 ? gt::optimal_eta(c) : 1e-3;
            for (const double eta : {eta_lo, 0.1}) {
                Eigen::VectorXd xv = Eigen::VectorXd::Zero(cell.d);
                xv[0] = 1.0;
                const double shift = cell.delta > 0.0
                    ? cell.delta / (std::abs(xv[0]) + 8.0 * eta + 1.0) : 0.0;
                auto eval = [shift, L = c.L](gt::TimeIndex t, const gt::ManifoldPoint& p) {
                    Eigen::VectorXd a = Eigen::VectorXd::Zero(p.coords.size());
                    if (t.half_steps % 2 == 1) a[0] = shift;
                    return 0.5 * L * (p.coords - a).squaredNorm();
                };
                auto grad = [shift, L = c.L](gt::TimeIndex t, const gt::ManifoldPoint& p) {
                    Eigen::VectorXd a = Eigen::VectorXd::Zero(p.coords.size());
                    if (t.half_steps % 2 == 1) a[0] = shift;
                    return gt::TangentVector{p, L * (p.coords - a)};
                };
                const gt::TimeVaryingObjective f(eval, c, grad);
                gt::RandomStream cell_rng = rng.substream(
                    static_cast<std::uint64_t>(cell.d * 1000 + (cell.delta > 0) * 100
                                               + (eta > 0.05)));
                const gt::DiagnosticReport rep = gt::verify_oracle_bounds(
                    m, f, gt::TimeIndex{0}, gt::ManifoldPoint{xv}, eta, samples, cell_rng,
                    understate);
                if (!rep.pass()) {
                    all_pass = false;
                    detail += " FAIL(d=" + std::to_string(cell.d) + ",delta=" + fmt(cell.delta)
                            + ",eta=" + fmt(eta) + ")";
                }
            }
        }
        {   // tightness cell: quadratic at its minimizer, large d
            const int d = 30;
            const gt::EuclideanManifold m(d);
            gt::ProblemConstants c;
            c.L = 1.5; c.sigma = 1.0; c.delta = 0.0; c.V = 0.0;
            c.kappa = 0.0; c.R = 100.0; c.d = d; c.G = 1e6;
            auto eval = [L = c.L](gt::TimeIndex, const gt::ManifoldPoint& p) {
                return 0.5 * L * p.coords.squaredNorm();
            };
            auto grad = [L = c.L](gt::TimeIndex, const gt::ManifoldPoint& p) {
                return gt::TangentVector{p, L * p.coords};
            };
            const gt::TimeVaryingObjective f(eval, c, grad);
            gt::RandomStream cell_rng = rng.substream(3141);
            const gt::DiagnosticReport rep = gt::verify_oracle_bounds(
                m, f, gt::TimeIndex{0}, gt::ManifoldPoint{Eigen::VectorXd::Zero(d)}, 0.01,
                samples, cell_rng, understate);
            if (!rep.pass()) {
                all_pass = false;
                detail += " FAIL(tightness cell d=30)";
            }
        }
        suites.push_back({"oracle bounds", all_pass, all_pass ? "all cells" : detail});
    }

    bool ok = true;
    for (const auto& suite : suites) {
        std::cout << (suite.pass ? "[PASS] " : "[FAIL] ") << suite.name << "  (" << suite.detail
                  << ")\n";
        ok = ok && suite.pass;
    }
    return ok ? 0 : 1;
}

int cmd_plot(const Settings& s, const std::vector<std::string>& csvs) {
    if (csvs.empty()) throw gt::ConfigError("plot: no input CSV files");
    std::vector<CsvSeries> series;
    series.reserve(csvs.size());
    for (const auto& path : csvs) series.push_back(read_run_csv(path));
    const std::string out = s.text("out", "plot.svg");
    write_svg(out, series);
    std::cout << "wrote " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"online zeroth-order optimization on Hadamard manifolds"};
    app.require_subcommand(1);

    auto settings = std::make_shared<Settings>();
    auto config_path = std::make_shared<std::string>();
    std::vector<std::string> plot_inputs;

    CLI::App* params = app.add_subcommand("params", "optimal eta/alpha and the tracking limit");
    CLI::App* bounds = app.add_subcommand("bounds", "bound report for a given (alpha, eta)");
    CLI::App* run = app.add_subcommand("run", "time-varying Karcher study, CSV per arm");
    CLI::App* verify = app.add_subcommand("verify", "geometry and oracle verification suites");
    CLI::App* plot = app.add_subcommand("plot", "render run CSVs as an SVG");
    for (CLI::App* cmd : {params, bounds, run, verify, plot})
        add_common_flags(cmd, settings, config_path);
    for (const char* key : {"e0", "epsilon", "understate-L"}) {
        const std::string name = std::string("--") + key;
        auto store = [settings, key = std::string(key)](double v) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            settings->set_flag(key, buf);
        };
        bounds->add_option_function<double>(name, store, "");
        verify->add_option_function<double>(name, store, "");
    }
    plot->add_option("csv", plot_inputs, "input CSV files from 'run'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);   // --help
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path->empty()) settings->load_file(*config_path);
        if (params->parsed()) return cmd_params(*settings);
        if (bounds->parsed()) return cmd_bounds(*settings);
        if (run->parsed()) return cmd_run(*settings);
        if (verify->parsed()) return cmd_verify(*settings);
        if (plot->parsed()) return cmd_plot(*settings, plot_inputs);
    } catch (const gt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gt::ContractViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gt::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gt::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const gt::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
