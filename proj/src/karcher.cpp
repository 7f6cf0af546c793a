#include "geotrack/karcher.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace geotrack {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) {
    return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_orthogonal(int m, RandomStream& rng) {
    Eigen::MatrixXd g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR();
    for (int j = 0; j < m; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

// X^{1/2} and X^{-1/2} from a single eigendecomposition.
void split_sqrt(const Eigen::MatrixXd& x, Eigen::MatrixXd& sq, Eigen::MatrixXd& w,
                const char* who) {
    const SymEig e = sym_eig(x);
    const double lmax = e.eigenvalues[0];
    if (!(lmax > 0.0) || !(e.eigenvalues[e.eigenvalues.size() - 1] > 1e-12 * lmax))
        throw DomainError(std::string(who) + ": matrix is not positive definite");
    const Eigen::VectorXd root = e.eigenvalues.array().sqrt();
    sq = symmetrize(e.eigenvectors * root.asDiagonal() * e.eigenvectors.transpose());
    const Eigen::VectorXd inv_root = root.array().inverse();
    w = symmetrize(e.eigenvectors * inv_root.asDiagonal() * e.eigenvectors.transpose());
}

double sq_log_norm(const Eigen::MatrixXd& whitened, const char* who) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(whitened, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw DomainError(std::string(who) + ": eig failed");
    const Eigen::VectorXd vals = es.eigenvalues();
    if (!(vals[0] > 0.0)) throw DomainError(std::string(who) + ": matrix left the SPD cone");
    return vals.array().log().square().sum();
}

// Whitened gradient-sum direction (1/N) sum_i log(w A_i w); the Riemannian
// gradient is -sq * result * sq and its norm at X equals the Frobenius norm
// of the result.
Eigen::MatrixXd whitened_log_mean(const Eigen::MatrixXd& w,
                                  const std::vector<Eigen::MatrixXd>& as) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(w.rows(), w.cols());
    for (const auto& a : as) acc += logm_spd(symmetrize(w * a * w));
    return acc / static_cast<double>(as.size());
}

// Fixed-step Riemannian gradient descent on the Karcher cost of a fixed set.
Eigen::MatrixXd descend_karcher(const std::vector<Eigen::MatrixXd>& as, Eigen::MatrixXd x,
                                double smoothness, double grad_tol, std::int64_t max_iters,
                                const char* who) {
    require(smoothness > 0.0, "karcher descent: smoothness must be positive");
    Eigen::MatrixXd sq, w;
    for (std::int64_t it = 0; it < max_iters; ++it) {
        split_sqrt(x, sq, w, who);
        const Eigen::MatrixXd gw = whitened_log_mean(w, as);
        if (gw.norm() <= grad_tol) return x;
        x = symmetrize(sq * expm_sym(gw / smoothness) * sq);
    }
    throw SolverError(std::string(who) + ": no convergence within the iteration budget");
}

double drift_phase(const KarcherInstance& inst, double s) {
    return inst.drift == DriftKind::ConstantSpeed ? inst.omega * s
                                                  : 2.0 * inst.omega * std::sqrt(s + 1.0);
}

} // namespace

void KarcherInstance::validate() const {
    require(m >= 1, "instance: m must be >= 1");
    require(N >= 1, "instance: N must be >= 1");
    require(horizon >= 1, "instance: horizon must be >= 1");
    require(omega >= 0.0, "instance: omega must be >= 0");
    require(lambda_min > 0.0 && lambda_min <= lambda_max,
            "instance: need 0 < lambda_min <= lambda_max");
}

Eigen::MatrixXd karcher_mean(const std::vector<Eigen::MatrixXd>& matrices, double grad_tol,
                             std::int64_t max_iters) {
    require(!matrices.empty(), "karcher_mean: need at least one matrix");
    Eigen::MatrixXd start = Eigen::MatrixXd::Zero(matrices[0].rows(), matrices[0].cols());
    for (const auto& a : matrices) start += a;
    start = symmetrize(start / static_cast<double>(matrices.size()));

    // step 1/L with L = zeta(-1/2, .) at twice the initial spread, an upper
    // bound on the cost Hessian over the descent region
    Eigen::MatrixXd sq, w;
    split_sqrt(start, sq, w, "karcher_mean");
    double max_dist = 0.0;
    for (const auto& a : matrices)
        max_dist = std::max(max_dist, std::sqrt(sq_log_norm(symmetrize(w * a * w), "karcher_mean")));
    const double smoothness = zeta(-0.5, 2.0 * max_dist + 1.0);
    return descend_karcher(matrices, start, smoothness, grad_tol, max_iters, "karcher_mean");
}

struct KarcherProblem::Body {
    SpdManifold manifold;
    KarcherInstance inst;
    struct Component {
        Eigen::MatrixXd sqrt_base;     // Abar^{1/2}
        Eigen::MatrixXd drift_frame;   // eigenvectors of Abar^{-1/2} D Abar^{-1/2}
        Eigen::VectorXd drift_rates;   // matching eigenvalues
    };
    std::vector<Component> comps;
    std::vector<Eigen::MatrixXd> bases;
    GeodesicBall ball;

    explicit Body(const SpdManifold& m, const KarcherInstance& i) : manifold(m), inst(i) {}

    std::vector<Eigen::MatrixXd> measurements(std::int64_t t) const {
        require(t >= 0, "karcher: half-step must be >= 0");
        const double phase = drift_phase(inst, static_cast<double>(t) / 2.0);
        std::vector<Eigen::MatrixXd> out;
        out.reserve(comps.size());
        for (const auto& comp : comps) {
            const Eigen::VectorXd scaled_exp = (phase * comp.drift_rates.array()).exp();
            const Eigen::MatrixXd inner =
                comp.drift_frame * scaled_exp.asDiagonal() * comp.drift_frame.transpose();
            out.push_back(symmetrize(comp.sqrt_base * symmetrize(inner) * comp.sqrt_base));
        }
        return out;
    }
};

namespace {

double evaluate_impl(const std::vector<Eigen::MatrixXd>& as, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd sq, w;
    split_sqrt(x, sq, w, "karcher eval");
    double acc = 0.0;
    for (const auto& a : as) acc += sq_log_norm(symmetrize(w * a * w), "karcher eval");
    return acc / (2.0 * static_cast<double>(as.size()));
}

Eigen::MatrixXd gradient_impl(const std::vector<Eigen::MatrixXd>& as, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd sq, w;
    split_sqrt(x, sq, w, "karcher grad");
    return symmetrize(-sq * whitened_log_mean(w, as) * sq);
}

} // namespace

KarcherProblem KarcherProblem::generate(const SpdManifold& m, const KarcherInstance& inst,
                                        RandomStream& rng) {
    inst.validate();
    require(m.matrix_size() == inst.m, "karcher: manifold size does not match the instance");

    std::vector<Eigen::MatrixXd> bases, directions;
    bases.reserve(inst.N);
    directions.reserve(inst.N);
    const double log_lo = std::log(inst.lambda_min);
    const double log_hi = std::log(inst.lambda_max);
    for (int i = 0; i < inst.N; ++i) {
        const Eigen::MatrixXd q = random_orthogonal(inst.m, rng);
        Eigen::VectorXd lambda(inst.m);
        for (int j = 0; j < inst.m; ++j) lambda[j] = std::exp(rng.uniform(log_lo, log_hi));
        bases.push_back(symmetrize(q * lambda.asDiagonal() * q.transpose()));

        Eigen::MatrixXd g(inst.m, inst.m);
        for (int r = 0; r < inst.m; ++r)
            for (int c = 0; c < inst.m; ++c) g(r, c) = rng.normal();
        directions.push_back(symmetrize(g));
    }
    return from_matrices(m, inst, bases, directions);
}

KarcherProblem KarcherProblem::from_matrices(const SpdManifold& m, const KarcherInstance& inst,
                                             const std::vector<Eigen::MatrixXd>& bases,
                                             const std::vector<Eigen::MatrixXd>& directions) {
    inst.validate();
    require(m.matrix_size() == inst.m, "karcher: manifold size does not match the instance");
    require(static_cast<int>(bases.size()) == inst.N, "karcher: need N base matrices");
    require(directions.size() == bases.size(), "karcher: need one direction per base");

    auto body = std::make_shared<Body>(m, inst);
    body->comps.reserve(inst.N);
    body->bases = bases;
    for (int i = 0; i < inst.N; ++i) {
        Eigen::MatrixXd sq, w;
        split_sqrt(bases[i], sq, w, "karcher generate");
        Eigen::MatrixXd whitened = symmetrize(w * symmetrize(directions[i]) * w);
        const double speed = whitened.norm();   // |direction|_base
        require(speed > 1e-14, "karcher: degenerate drift direction");
        whitened /= speed;

        const SymEig e = sym_eig(whitened);
        body->comps.push_back({sq, e.eigenvectors, e.eigenvalues});
    }

    const Eigen::MatrixXd center = karcher_mean(body->bases);
    Eigen::MatrixXd csq, cw;
    split_sqrt(center, csq, cw, "karcher generate");
    double r_max = 0.0;
    for (const auto& base : body->bases)
        r_max = std::max(r_max,
                         std::sqrt(sq_log_norm(symmetrize(cw * base * cw), "karcher generate")));
    const double phi_max = drift_phase(inst, static_cast<double>(inst.horizon) + 1.0);
    // 1.0 floor keeps degenerate single-point scenarios usable as a domain.
    const double radius = std::max(1.05 * r_max + phi_max, 1.0);
    body->ball = GeodesicBall{ManifoldPoint{body->manifold.to_coords(center)}, radius};

    KarcherProblem p;
    p.body_ = std::move(body);
    return p;
}

const SpdManifold& KarcherProblem::manifold() const { return body_->manifold; }
const KarcherInstance& KarcherProblem::instance() const { return body_->inst; }
const GeodesicBall& KarcherProblem::domain_ball() const { return body_->ball; }

std::vector<Eigen::MatrixXd> KarcherProblem::matrices_at(std::int64_t t) const {
    return body_->measurements(t);
}

double KarcherProblem::evaluate(std::int64_t t, const Eigen::MatrixXd& x) const {
    return evaluate_impl(body_->measurements(t), x);
}

Eigen::MatrixXd KarcherProblem::riemannian_gradient(std::int64_t t, const Eigen::MatrixXd& x) const {
    return gradient_impl(body_->measurements(t), x);
}

TimeVaryingObjective KarcherProblem::make_objective(const ProblemConstants& c) const {
    require(c.d == body_->manifold.intrinsic_dim(),
            "karcher: constants dimension does not match the manifold");
    struct Cache {
        std::unordered_map<std::int64_t, std::vector<Eigen::MatrixXd>> table;
    };
    auto body = body_;
    auto cache = std::make_shared<Cache>();
    auto measurements = [body, cache](std::int64_t t) -> const std::vector<Eigen::MatrixXd>& {
        auto it = cache->table.find(t);
        if (it == cache->table.end())
            it = cache->table.emplace(t, body->measurements(t)).first;
        return it->second;
    };
    TimeVaryingObjective::EvalFn eval = [body, measurements](TimeIndex t, const ManifoldPoint& x) {
        return evaluate_impl(measurements(t.half_steps), body->manifold.to_matrix(x.coords));
    };
    TimeVaryingObjective::GradFn grad = [body, measurements](TimeIndex t, const ManifoldPoint& x) {
        const Eigen::MatrixXd g =
            gradient_impl(measurements(t.half_steps), body->manifold.to_matrix(x.coords));
        return TangentVector{x, body->manifold.to_coords(g)};
    };
    return TimeVaryingObjective(std::move(eval), c, std::move(grad));
}

ManifoldPoint true_minimizer(const KarcherProblem& p, std::int64_t t,
                             const ManifoldPoint& warm_start, double smoothness,
                             double grad_tol, std::int64_t max_iters) {
    const auto as = p.matrices_at(t);
    const Eigen::MatrixXd x = descend_karcher(as, p.manifold().to_matrix(warm_start.coords),
                                              smoothness, grad_tol, max_iters, "true_minimizer");
    return ManifoldPoint{p.manifold().to_coords(x)};
}

std::vector<ManifoldPoint> minimizer_chain(const KarcherProblem& p, std::int64_t T,
                                           double smoothness, double grad_tol) {
    require(T >= 1, "minimizer_chain: T must be >= 1");
    std::vector<ManifoldPoint> out;
    out.reserve(2 * T + 2);
    ManifoldPoint warm = p.domain_ball().center;
    for (std::int64_t t = 0; t <= 2 * T + 1; ++t) {
        warm = true_minimizer(p, t, warm, smoothness, grad_tol);
        out.push_back(warm);
    }
    return out;
}

double measure_delta_hat(const KarcherProblem& p, int probes, RandomStream& rng) {
    require(probes >= 1, "measure_delta_hat: need at least one probe");
    const SpdManifold& m = p.manifold();
    const GeodesicBall& ball = p.domain_ball();
    double worst = 0.0;
    for (int j = 0; j < probes; ++j) {
        const std::int64_t t =
            static_cast<std::int64_t>(rng.uniform_index(2 * p.instance().horizon));
        TangentVector u = m.sample_tangent_gaussian(ball.center, rng);
        const double un = m.norm(ball.center, u);
        ManifoldPoint x = ball.center;
        if (un > 1e-14)
            x = m.exp(ball.center, scaled(u, rng.uniform(0.0, ball.radius) / un));
        const Eigen::MatrixXd xm = m.to_matrix(x.coords);
        worst = std::max(worst, std::abs(p.evaluate(t, xm) - p.evaluate(t + 1, xm)));
    }
    return worst;
}

double calibrate_omega(const SpdManifold& m, const KarcherInstance& inst, double delta_target,
                       int probes, RandomStream& rng) {
    require(delta_target > 0.0, "calibrate_omega: delta_target must be positive");
    require(probes >= 1, "calibrate_omega: need at least one probe");

    const std::uint64_t gen_seed = rng.next_u64();
    auto make_problem = [&](double omega) {
        KarcherInstance trial = inst;
        trial.omega = omega;
        RandomStream gen(gen_seed);
        return KarcherProblem::generate(m, trial, gen);
    };

    // Fixed probe directions, radial fractions and steps shared by every trial
    // so the bisection sees a monotone map; points are materialized inside each
    // trial's own ball, whose radius carries that trial's drift allowance (runs
    // evaluate the cost throughout that region).
    const KarcherProblem base = make_problem(0.0);
    std::vector<TangentVector> directions;
    std::vector<double> fractions;
    std::vector<std::int64_t> steps;
    directions.reserve(probes);
    fractions.reserve(probes);
    steps.reserve(probes);
    for (int j = 0; j < probes; ++j) {
        steps.push_back(static_cast<std::int64_t>(rng.uniform_index(2 * inst.horizon)));
        TangentVector u = m.sample_tangent_gaussian(base.domain_ball().center, rng);
        const double un = m.norm(base.domain_ball().center, u);
        directions.push_back(un > 1e-14 ? scaled(u, 1.0 / un) : u);
        fractions.push_back(rng.uniform(0.0, 1.0));
    }
    auto delta_hat = [&](double omega) {
        const KarcherProblem p = make_problem(omega);
        const GeodesicBall& ball = p.domain_ball();
        double worst = 0.0;
        for (int j = 0; j < probes; ++j) {
            try {
                const ManifoldPoint x =
                    m.exp(ball.center, scaled(directions[j], fractions[j] * ball.radius));
                const Eigen::MatrixXd xm = m.to_matrix(x.coords);
                worst = std::max(worst,
                                 std::abs(p.evaluate(steps[j], xm) - p.evaluate(steps[j] + 1, xm)));
            } catch (const DomainError&) {
                // the trial speed blew the measurements out of numeric range;
                // certainly far above any reasonable target
                return std::numeric_limits<double>::infinity();
            }
        }
        return worst;
    };

    int budget = 60;
    double lo = 0.0, hi = 1.0;
    while (delta_hat(hi) < 0.8 * delta_target) {
        lo = hi;
        hi *= 2.0;
        if (--budget <= 0)
            throw SolverError("calibrate_omega: target not bracketed within the step budget");
    }
    if (delta_hat(hi) <= delta_target) return hi;
    while (budget-- > 0) {
        const double mid = 0.5 * (lo + hi);
        const double dh = delta_hat(mid);
        if (dh >= 0.8 * delta_target && dh <= delta_target) return mid;
        (dh > delta_target ? hi : lo) = mid;
    }
    throw SolverError("calibrate_omega: no omega hit [0.8, 1.0] * delta_target in 60 steps");
}

MetricsTrace evaluate_run(const KarcherProblem& p, const ProblemConstants& c,
                          const RunRecord& rec, const std::vector<ManifoldPoint>& minimizers) {
    const std::int64_t T = static_cast<std::int64_t>(rec.params_used.size());
    require(static_cast<std::int64_t>(rec.iterates.size()) == T + 1,
            "evaluate_run: iterate/parameter length mismatch");
    require(static_cast<std::int64_t>(minimizers.size()) >= 2 * T + 2,
            "evaluate_run: minimizers must cover half-steps 0..2T+1");
    const SpdManifold& m = p.manifold();

    MetricsTrace tr;
    tr.e.resize(T + 1);
    tr.ebar.resize(T);
    tr.reg_track.resize(T + 1);
    tr.reg_est.resize(T);
    tr.vt_cum.assign(T + 1, 0.0);

    double track_acc = 0.0, est_acc = 0.0;
    for (std::int64_t k = 0; k <= T; ++k) {
        const std::int64_t t_plus = 2 * k + 1;
        const ManifoldPoint& star = minimizers[t_plus];
        const Eigen::MatrixXd xk = m.to_matrix(rec.iterates[k].coords);
        const double f_star = p.evaluate(t_plus, m.to_matrix(star.coords));
        const double f_at_xk = p.evaluate(t_plus, xk);

        tr.e[k] = m.distance(rec.iterates[k], star);
        track_acc += f_at_xk - f_star;
        tr.reg_track[k] = track_acc;

        if (k < T) {
            tr.ebar[k] = m.distance(rec.iterates[k + 1], star);
            est_acc += p.evaluate(t_plus, m.to_matrix(rec.iterates[k + 1].coords)) - f_star;
            tr.reg_est[k] = est_acc;
            tr.vt_cum[k + 1] = tr.vt_cum[k] + m.distance(minimizers[t_plus], minimizers[t_plus + 2]);
        }

        tr.delta_hat = std::max(tr.delta_hat, std::abs(p.evaluate(2 * k, xk) - f_at_xk));
    }
    for (std::int64_t j = 0; j <= 2 * T; ++j)
        tr.v_hat = std::max(tr.v_hat, m.distance(minimizers[j], minimizers[j + 1]));

    tr.assumptions_ok = tr.delta_hat <= c.delta * (1.0 + 1e-9) + 1e-15
                     && tr.v_hat <= c.V * (1.0 + 1e-9) + 1e-15;
    return tr;
}

int run_parallelism(int runs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("GEOTRACK_THREADS")) {
        const int requested = std::atoi(env);
        if (requested >= 1) cap = requested;
    }
    return std::min(cap, std::max(runs, 1));
}

namespace {

void reduce_arm(const std::vector<MetricsTrace>& traces, std::int64_t T, ArmTrace& out) {
    const double n = static_cast<double>(traces.size());
    auto mean_of = [&](auto getter, std::int64_t size, std::vector<double>& mean,
                       std::vector<double>* stderr_out) {
        mean.assign(size, 0.0);
        for (const auto& tr : traces)
            for (std::int64_t k = 0; k < size; ++k) mean[k] += getter(tr)[k];
        for (auto& v : mean) v /= n;
        if (stderr_out) {
            stderr_out->assign(size, 0.0);
            if (traces.size() > 1) {
                for (const auto& tr : traces)
                    for (std::int64_t k = 0; k < size; ++k) {
                        const double dev = getter(tr)[k] - mean[k];
                        (*stderr_out)[k] += dev * dev;
                    }
                for (auto& v : *stderr_out) v = std::sqrt(v / (n * (n - 1.0)));
            }
        }
    };
    mean_of([](const MetricsTrace& t) -> const std::vector<double>& { return t.e; }, T + 1,
            out.e_mean, &out.e_stderr);
    mean_of([](const MetricsTrace& t) -> const std::vector<double>& { return t.ebar; }, T,
            out.ebar_mean, nullptr);
    mean_of([](const MetricsTrace& t) -> const std::vector<double>& { return t.reg_track; }, T + 1,
            out.reg_track_mean, nullptr);
    mean_of([](const MetricsTrace& t) -> const std::vector<double>& { return t.reg_est; }, T,
            out.reg_est_mean, nullptr);
    mean_of([](const MetricsTrace& t) -> const std::vector<double>& { return t.vt_cum; }, T + 1,
            out.vt_cum_mean, nullptr);
    for (const auto& tr : traces) {
        out.delta_hat_max = std::max(out.delta_hat_max, tr.delta_hat);
        out.v_hat_max = std::max(out.v_hat_max, tr.v_hat);
        if (!tr.assumptions_ok) ++out.flagged_runs;
    }
}

} // namespace

StudyResult averaged_study(const SpdManifold& m, const KarcherInstance& inst,
                           const ProblemConstants& c, const StepSchedule& schedule, int runs,
                           RandomStream& rng, bool with_first_order) {
    inst.validate();
    c.validate();
    require(runs >= 1, "averaged_study: runs must be >= 1");
    require(c.d == m.intrinsic_dim(), "averaged_study: constants d must match the manifold");
    const std::int64_t T = inst.horizon;

    std::vector<MetricsTrace> zo(runs), fo(runs);
    std::vector<double> radii(runs, 0.0);

    auto run_one = [&](int r) {
        RandomStream run_rng = rng.substream(static_cast<std::uint64_t>(r));
        RandomStream gen_rng = run_rng.substream(0);
        RandomStream zo_rng = run_rng.substream(1);
        RandomStream x0_rng = run_rng.substream(2);
        RandomStream fo_rng = run_rng.substream(3);

        const KarcherProblem problem = KarcherProblem::generate(m, inst, gen_rng);
        const GeodesicBall& ball = problem.domain_ball();
        radii[r] = ball.radius;

        TangentVector u = m.sample_tangent_gaussian(ball.center, x0_rng);
        const double un = m.norm(ball.center, u);
        const ManifoldPoint x0 = (un > 1e-14)
            ? m.exp(ball.center, scaled(u, 0.9 * ball.radius / un))
            : ball.center;

        const auto minimizers = minimizer_chain(problem, T, c.L);

        const TimeVaryingObjective obj_zo = problem.make_objective(c);
        const RunRecord rec_zo = run(m, obj_zo, x0, ball, schedule, T, zo_rng);
        zo[r] = evaluate_run(problem, c, rec_zo, minimizers);

        if (with_first_order) {
            const TimeVaryingObjective obj_fo = problem.make_objective(c);
            const RunRecord rec_fo =
                run(m, obj_fo, x0, ball, schedule, T, fo_rng, GradientSource::FirstOrder);
            fo[r] = evaluate_run(problem, c, rec_fo, minimizers);
        }
    };

    const int workers = run_parallelism(runs);
    if (workers <= 1) {
        for (int r = 0; r < runs; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) {
                    try {
                        run_one(r);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    StudyResult out;
    out.T = T;
    out.runs = runs;
    out.has_first_order = with_first_order;
    out.alpha_k.reserve(T + 1);
    out.eta_k.reserve(T + 1);
    for (std::int64_t k = 0; k <= T; ++k) {
        const AlgorithmParams p = schedule.params_at(k);
        out.alpha_k.push_back(p.alpha);
        out.eta_k.push_back(p.eta);
    }
    reduce_arm(zo, T, out.zeroth);
    if (with_first_order) reduce_arm(fo, T, out.first);
    for (double r : radii) out.mean_ball_radius += r;
    out.mean_ball_radius /= static_cast<double>(runs);
    return out;
}

} // namespace geotrack
