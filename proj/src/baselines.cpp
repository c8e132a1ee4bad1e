#include "d2lqg/baselines.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <vector>

namespace d2lqg::baselines {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenRatio = 0.6180339887498949;

MultiplierSchedule constant_schedule(double lambda, int N) {
    MultiplierSchedule s;
    s.lambdas.assign(static_cast<std::size_t>(N) + 1, lambda);
    return s;
}

}  // namespace

Controller synth_lqg(const model::ValidatedProblem& problem) {
    const int N = problem.N;
    const Eigen::MatrixXd I_n = Eigen::MatrixXd::Identity(problem.n, problem.n);
    Eigen::LLT<Eigen::MatrixXd> r_llt(problem.R);
    const Eigen::MatrixXd BRinvBt = problem.B * r_llt.solve(problem.B.transpose());

    Controller ctrl;
    ctrl.method = Method::LQG;
    ctrl.gains.assign(static_cast<std::size_t>(N) + 1, Eigen::MatrixXd());
    std::vector<Eigen::MatrixXd> P(static_cast<std::size_t>(N) + 2);
    P[static_cast<std::size_t>(N) + 1] = problem.Q_terminal;

    Eigen::MatrixXd Pt = problem.Q_terminal;
    for (int t = N; t >= 0; --t) {
        Eigen::LLT<Eigen::MatrixXd> p_llt(Pt);
        if (p_llt.info() != Eigen::Success) throw NotPositiveDefinite("P (LQG recursion)");
        Eigen::MatrixXd inner = p_llt.solve(I_n) + BRinvBt;
        inner = 0.5 * (inner + inner.transpose());
        Eigen::LLT<Eigen::MatrixXd> inner_llt(inner);
        const Eigen::MatrixXd core = inner_llt.solve(problem.A);
        ctrl.gains[static_cast<std::size_t>(t)] = r_llt.solve(problem.B.transpose() * core);
        Pt = problem.Q + problem.A.transpose() * core;
        Pt = 0.5 * (Pt + Pt.transpose());
        P[static_cast<std::size_t>(t)] = Pt;
    }
    ctrl.P0 = P.front();
    ctrl.P = std::move(P);
    ctrl.provenance = "lqg backward recursion";
    return ctrl;
}

Controller synth_dlqg(const model::ValidatedProblem& problem, const dual_opt::SolveOptions& opts) {
    const int N = problem.N;
    const riccati::Variant variant = riccati::default_variant(problem);

    auto W0_const = [&](double lambda) {
        return dual_opt::eval_W0(constant_schedule(lambda, N), problem, variant, problem.x0);
    };

    // A feasible starting constant: kappa escalation on the terminal floor, then
    // a geometric sweep as fallback.
    double lam_start = kInf;
    const double terminal_floor = riccati::lambda_floor(problem.Q_terminal, problem.V);
    for (double kappa = opts.kappa_init; kappa <= 1e4; kappa *= 10.0) {
        if (std::isfinite(W0_const(kappa * terminal_floor))) {
            lam_start = kappa * terminal_floor;
            break;
        }
    }
    if (!std::isfinite(lam_start)) {
        for (double lam = terminal_floor * 1e-3; lam <= terminal_floor * 1e12; lam *= 1.258925411794167) {
            if (std::isfinite(W0_const(lam))) {
                lam_start = lam;
                break;
            }
        }
    }
    if (!std::isfinite(lam_start)) throw InitializationFailed();

    // Walk down toward the joint feasibility floor, then bracket the minimum by
    // doubling the gap above it.
    double lo = lam_start;
    while (lo > 1e-300 && std::isfinite(W0_const(lo * 0.8))) lo *= 0.8;
    const double joint_floor = lo * 0.8;

    std::vector<double> xs, fs;
    double gap = std::max(joint_floor, 1e-300) * 1e-6;
    std::size_t best = 0;
    int rises = 0;
    for (int k = 0; k < 160; ++k) {
        const double xk = joint_floor + gap;
        const double fk = W0_const(xk);
        xs.push_back(xk);
        fs.push_back(fk);
        if (fk < fs[best]) {
            best = xs.size() - 1;
            rises = 0;
        } else if (std::isfinite(fs[best])) {
            if (++rises >= 2) break;
        }
        gap *= 2.0;
    }
    if (!std::isfinite(fs[best])) throw InitializationFailed();

    double a = (best > 0) ? xs[best - 1] : joint_floor;
    double b = (best + 1 < xs.size()) ? xs[best + 1] : xs.back() * 2.0;
    double best_x = xs[best];
    double best_f = fs[best];
    double c = b - kGoldenRatio * (b - a);
    double d = a + kGoldenRatio * (b - a);
    double fc = W0_const(c), fd = W0_const(d);
    if (fc < best_f) best_x = c, best_f = fc;
    if (fd < best_f) best_x = d, best_f = fd;
    for (int it = 0; it < 400 && (b - a) > opts.inner_tol * 0.5 * (std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatio * (b - a);
            fc = W0_const(c);
            if (fc < best_f) best_x = c, best_f = fc;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatio * (b - a);
            fd = W0_const(d);
            if (fd < best_f) best_x = d, best_f = fd;
        }
    }

    const MultiplierSchedule sched = constant_schedule(best_x, N);
    riccati::RiccatiSolution sol = riccati::backward_pass(sched, problem, variant);
    Controller ctrl = riccati::gains(sched, sol, problem, variant);
    ctrl.method = Method::DLQG;
    ctrl.value = best_f;
    ctrl.suboptimal_bound = (variant == riccati::Variant::D2LQG_E2);
    ctrl.provenance = "constant-multiplier golden section";
    return ctrl;
}

}  // namespace d2lqg::baselines
