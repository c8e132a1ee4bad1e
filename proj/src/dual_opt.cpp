#include "d2lqg/dual_opt.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace d2lqg::dual_opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_eig_sym(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

// Shared evaluation engine. Coordinate updates only touch stages t <= j, so the
// untouched suffix (P_{j+1} and the offsets c_{j+1}..c_N) is computed once per
// coordinate and reused across line-search probes. Accumulation order matches
// the full pass exactly, so cached and full evaluations agree bitwise.
struct Evaluator {
    const model::ValidatedProblem& prob;
    riccati::detail::StageContext ctx;
    Eigen::VectorXd x;
    std::int64_t evals = 0;

    Evaluator(const model::ValidatedProblem& p, riccati::Variant v, const Eigen::VectorXd& x_in)
        : prob(p), ctx(p, v), x(x_in) {}

    double full(const std::vector<double>& lams) {
        ++evals;
        Eigen::MatrixXd P = prob.Q_terminal;
        double sc = 0.0;
        for (int t = prob.N; t >= 0; --t) {
            double c = 0.0;
            if (!ctx.step(P, c, lams[static_cast<std::size_t>(t)], t)) return kInf;
            sc += c;
        }
        return 0.5 * x.dot(P * x) + sc;
    }

    // Suffix N..j+1. Returns false if the suffix itself is infeasible.
    bool tail(const std::vector<double>& lams, int j, Eigen::MatrixXd& P_out, double& c_out) {
        Eigen::MatrixXd P = prob.Q_terminal;
        double sc = 0.0;
        for (int t = prob.N; t > j; --t) {
            double c = 0.0;
            if (!ctx.step(P, c, lams[static_cast<std::size_t>(t)], t)) return false;
            sc += c;
        }
        P_out = std::move(P);
        c_out = sc;
        return true;
    }

    // Stages j..0 with lambda_j replaced by y, continuing from the cached suffix.
    double head(const std::vector<double>& lams, int j, double y, const Eigen::MatrixXd& P_j1,
                double tail_c) {
        ++evals;
        Eigen::MatrixXd P = P_j1;
        double sc = tail_c;
        for (int t = j; t >= 0; --t) {
            const double lam = (t == j) ? y : lams[static_cast<std::size_t>(t)];
            double c = 0.0;
            if (!ctx.step(P, c, lam, t)) return kInf;
            sc += c;
        }
        return 0.5 * x.dot(P * x) + sc;
    }
};

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5)-1)/2

// One-dimensional minimization over lambda_j in (floor, inf): bracket by
// doubling the gap above the floor, then golden-section keeping the best
// evaluated point. Falls back to the incumbent when no probe improves on it.
double line_search(Evaluator& ev, const std::vector<double>& lams, int j,
                   const Eigen::MatrixXd& P_j1, double tail_c, double floor, double incumbent,
                   double inner_tol) {
    auto f = [&](double y) { return ev.head(lams, j, y, P_j1, tail_c); };

    const double f_inc = f(incumbent);

    std::vector<double> xs, fs;
    xs.reserve(80);
    fs.reserve(80);
    double gap = 1e-6 * floor;
    std::size_t best = 0;
    int rises = 0;
    for (int k = 0; k < 120; ++k) {
        const double xk = floor + gap;
        const double fk = f(xk);
        xs.push_back(xk);
        fs.push_back(fk);
        if (fk < fs[best]) {
            best = xs.size() - 1;
            rises = 0;
        } else if (std::isfinite(fs[best])) {
            if (++rises >= 2) break;
        }
        gap *= 2.0;
        if (!std::isfinite(gap)) break;
    }

    if (!std::isfinite(fs[best])) {
        if (!std::isfinite(f_inc)) throw NoFiniteValueFound(j);
        return incumbent;  // probes all infeasible; keep the current point
    }

    double a = (best > 0) ? xs[best - 1] : floor * (1.0 + riccati::kFeasibilityMargin * 10.0);
    double b = (best + 1 < xs.size()) ? xs[best + 1] : xs.back() * 2.0;
    double best_x = xs[best];
    double best_f = fs[best];

    double c = b - kGoldenRatio * (b - a);
    double d = a + kGoldenRatio * (b - a);
    double fc = f(c), fd = f(d);
    if (fc < best_f) best_x = c, best_f = fc;
    if (fd < best_f) best_x = d, best_f = fd;
    for (int it = 0; it < 400 && (b - a) > inner_tol * 0.5 * (std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatio * (b - a);
            fc = f(c);
            if (fc < best_f) best_x = c, best_f = fc;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatio * (b - a);
            fd = f(d);
            if (fd < best_f) best_x = d, best_f = fd;
        }
    }

    return (best_f < f_inc) ? best_x : incumbent;
}

double coordinate_update(Evaluator& ev, std::vector<double>& lams, int j, double inner_tol) {
    Eigen::MatrixXd P_j1;
    double tail_c = 0.0;
    if (!ev.tail(lams, j, P_j1, tail_c)) throw NoFiniteValueFound(j);
    const double floor =
        max_eig_sym(ev.prob.V_sqrt * P_j1 * ev.prob.V_sqrt);
    return line_search(ev, lams, j, P_j1, tail_c, floor, lams[static_cast<std::size_t>(j)],
                       inner_tol);
}

}  // namespace

double eval_W0(const MultiplierSchedule& lambdas, const model::ValidatedProblem& problem,
               riccati::Variant variant, const Eigen::VectorXd& x) {
    if (lambdas.horizon() != problem.N) {
        throw DimensionMismatch("multiplier schedule must have length N+1");
    }
    Evaluator ev(problem, variant, x);
    return ev.full(lambdas.lambdas);
}

double minimize_coordinate(int j, const MultiplierSchedule& lambdas,
                           const model::ValidatedProblem& problem, riccati::Variant variant,
                           const Eigen::VectorXd& x, const SolveOptions& opts) {
    if (j < 0 || j > problem.N) throw DimensionMismatch("coordinate index outside horizon");
    Evaluator ev(problem, variant, x);
    std::vector<double> lams = lambdas.lambdas;
    return coordinate_update(ev, lams, j, opts.inner_tol);
}

MultiplierSchedule initial_schedule(const model::ValidatedProblem& problem,
                                    riccati::Variant variant, const SolveOptions& opts) {
    riccati::detail::StageContext ctx(problem, variant);
    for (double kappa = opts.kappa_init; kappa <= 1e4; kappa *= 10.0) {
        MultiplierSchedule sched;
        sched.lambdas.assign(static_cast<std::size_t>(problem.N) + 1, 0.0);
        Eigen::MatrixXd P = problem.Q_terminal;
        bool ok = true;
        for (int t = problem.N; t >= 0; --t) {
            const double floor = max_eig_sym(problem.V_sqrt * P * problem.V_sqrt);
            const double lam = kappa * floor;
            sched.lambdas[static_cast<std::size_t>(t)] = lam;
            double c = 0.0;
            if (!ctx.step(P, c, lam, t) || !P.allFinite() || P.norm() > 1e100) {
                ok = false;
                break;
            }
        }
        if (ok) return sched;
    }
    throw InitializationFailed();
}

SolveReport coordinate_descent(const model::ValidatedProblem& problem, riccati::Variant variant,
                               const Eigen::VectorXd& x, const SolveOptions& opts) {
    MultiplierSchedule sched = initial_schedule(problem, variant, opts);
    Evaluator ev(problem, variant, x);

    double w = ev.full(sched.lambdas);
    if (!std::isfinite(w)) throw InitializationFailed();

    SolveReport report;
    report.converged = false;

    int sweeps = 0;
    while (sweeps < opts.max_sweeps) {
        const double w_prev = w;
        for (int j = 0; j <= problem.N; ++j) {
            sched.lambdas[static_cast<std::size_t>(j)] =
                coordinate_update(ev, sched.lambdas, j, opts.inner_tol);
        }
        ++sweeps;
        w = ev.full(sched.lambdas);
        if (w_prev - w <= opts.tol_rel * std::max(1.0, std::abs(w_prev))) {
            report.converged = true;
            break;
        }
    }

    report.lambdas_opt = sched;
    report.iterations = sweeps;
    report.value = ev.full(sched.lambdas);

    // Scaled central-difference gradient at the reported optimum.
    double gnorm = 0.0;
    const double denom = 1.0 + std::abs(report.value);
    for (int t = 0; t <= problem.N; ++t) {
        const double lam = sched.lambdas[static_cast<std::size_t>(t)];
        double h = 1e-6 * lam;
        std::vector<double> probe = sched.lambdas;
        probe[static_cast<std::size_t>(t)] = lam + h;
        const double f_plus = ev.full(probe);
        probe[static_cast<std::size_t>(t)] = lam - h;
        double f_minus = ev.full(probe);
        double g;
        if (std::isfinite(f_minus)) {
            g = (f_plus - f_minus) / (2.0 * h);
        } else {
            g = (f_plus - report.value) / h;  // one-sided next to the floor
        }
        gnorm = std::max(gnorm, std::abs(g) * lam / denom);
    }
    report.gradient_norm = gnorm;
    report.inner_evals = ev.evals;
    return report;
}

Controller synth_d2lqg(const model::ValidatedProblem& problem, riccati::Variant variant,
                       const SolveOptions& opts) {
    SolveReport report = coordinate_descent(problem, variant, problem.x0, opts);
    riccati::RiccatiSolution sol = riccati::backward_pass(report.lambdas_opt, problem, variant);
    Controller ctrl = riccati::gains(report.lambdas_opt, sol, problem, variant);
    ctrl.method = (variant == riccati::Variant::D2LQG_E2) ? Method::D2LQG_E2 : Method::D2LQG;
    ctrl.value = report.value;
    ctrl.suboptimal_bound = (variant == riccati::Variant::D2LQG_E2);
    ctrl.provenance = "coordinate_descent sweeps=" + std::to_string(report.iterations) +
                      " converged=" + (report.converged ? std::string("yes") : std::string("no")) +
                      " inner_evals=" + std::to_string(report.inner_evals);
    return ctrl;
}

Controller synth_d2lqg(const model::ValidatedProblem& problem, const SolveOptions& opts) {
    return synth_d2lqg(problem, riccati::default_variant(problem), opts);
}

}  // namespace d2lqg::dual_opt
