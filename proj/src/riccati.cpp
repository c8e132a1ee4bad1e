#include "d2lqg/riccati.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cassert>
#include <limits>
#include <vector>
#include <cmath>

namespace d2lqg::riccati {

Variant default_variant(const model::ValidatedProblem& problem) {
    return problem.E2 ? Variant::D2LQG_E2 : Variant::D2LQG;
}

double RiccatiSolution::offset_sum() const {
    double s = 0.0;
    for (double ci : c) s += ci;
    return s;
}

double lambda_floor(const Eigen::MatrixXd& P_next, const Eigen::MatrixXd& V) {
    Eigen::LLT<Eigen::MatrixXd> vllt(V);
    if (vllt.info() != Eigen::Success) throw NotPositiveDefinite("V");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> vs(V);
    if (vs.eigenvalues().minCoeff() <= 0.0) throw NotPositiveDefinite("V");
    const Eigen::MatrixXd Vh =
        vs.eigenvectors() * vs.eigenvalues().cwiseSqrt().asDiagonal() * vs.eigenvectors().transpose();
    const Eigen::MatrixXd conj = Vh * P_next * Vh;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (conj + conj.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

namespace {

// ln det(I - C) for symmetric C, or NaN when I - C is not positive definite.
// The subtraction from the identity and the factorization run in extended
// precision: near the feasibility floor C approaches the identity and a plain
// double Cholesky loses ~1e-16 absolute in the log-determinant, which the
// offsets c_t amplify by lambda/2.
double logdet_identity_minus(const Eigen::MatrixXd& C) {
    const int n = static_cast<int>(C.rows());
    thread_local std::vector<long double> work;
    work.assign(static_cast<std::size_t>(n) * n, 0.0L);
    auto L = [&](int i, int j) -> long double& { return work[static_cast<std::size_t>(i) * n + j]; };
    long double logdet = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            long double s = (i == j ? 1.0L : 0.0L) - static_cast<long double>(C(i, j));
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0L) return std::numeric_limits<double>::quiet_NaN();
                L(i, i) = sqrtl(s);
                logdet += logl(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return static_cast<double>(logdet);
}

}  // namespace

namespace detail {

StageContext::StageContext(const model::ValidatedProblem& p, Variant v) : problem(&p), variant(v) {
    E1tE1 = p.E1.transpose() * p.E1;
    I_n = Eigen::MatrixXd::Identity(p.n, p.n);
    if (variant == Variant::D2LQG) {
        Eigen::LLT<Eigen::MatrixXd> rllt(p.R);
        BRinvBt = p.B * rllt.solve(p.B.transpose());
    } else {
        BRinvBt = Eigen::MatrixXd::Zero(p.n, p.n);
    }
}

Eigen::MatrixXd StageContext::control_term(double lambda) const {
    switch (variant) {
        case Variant::WorstPerformance:
            return Eigen::MatrixXd::Zero(problem->n, problem->n);
        case Variant::D2LQG:
            return BRinvBt;
        case Variant::D2LQG_E2: {
            const Eigen::MatrixXd& E2 = *problem->E2;
            Eigen::MatrixXd Rt = problem->R + lambda * (E2.transpose() * E2);
            Eigen::LLT<Eigen::MatrixXd> llt(Rt);
            return problem->B * llt.solve(problem->B.transpose());
        }
    }
    return BRinvBt;
}

bool StageContext::step(Eigen::MatrixXd& P, double& c_out, double lambda, int stage) const {
    const model::ValidatedProblem& prob = *problem;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return false;

    // Feasibility with margin: lambda >= (1 + eps) * max eig(P V), checked as
    // positive definiteness of I - (1 + eps) V^{1/2} P V^{1/2} / lambda.
    Eigen::MatrixXd conj = prob.V_sqrt * P * prob.V_sqrt / lambda;
    conj = 0.5 * (conj + conj.transpose());
    {
        Eigen::LLT<Eigen::MatrixXd> margin_llt(I_n - (1.0 + kFeasibilityMargin) * conj);
        if (margin_llt.info() != Eigen::Success) return false;
    }
    const double logdet = logdet_identity_minus(conj);
    if (std::isnan(logdet)) return false;

    Eigen::LLT<Eigen::MatrixXd> p_llt(P);
    if (p_llt.info() != Eigen::Success) return false;
    Eigen::MatrixXd inner = p_llt.solve(I_n);
    if (variant == Variant::D2LQG) {
        inner += BRinvBt;
    } else if (variant == Variant::D2LQG_E2) {
        inner += control_term(lambda);
    }
    inner -= prob.V / lambda;
    inner = 0.5 * (inner + inner.transpose());
    Eigen::LLT<Eigen::MatrixXd> inner_llt(inner);
    if (inner_llt.info() != Eigen::Success) return false;

    Eigen::MatrixXd Pn = prob.Q + lambda * E1tE1 + prob.A.transpose() * inner_llt.solve(prob.A);
    const double asym = (Pn - Pn.transpose()).norm();
    assert(asym <= 1e-10 * std::max(1.0, Pn.norm()));
    (void)asym;
    Pn = 0.5 * (Pn + Pn.transpose());
    if (!Pn.allFinite()) return false;

    c_out = -0.5 * lambda * logdet + lambda * prob.d[static_cast<std::size_t>(stage)];
    P = std::move(Pn);
    return true;
}

}  // namespace detail

StageResult riccati_step(const Eigen::MatrixXd& P_next, double lambda, int stage,
                         const model::ValidatedProblem& problem, Variant variant) {
    detail::StageContext ctx(problem, variant);
    Eigen::MatrixXd P = P_next;
    double c = 0.0;
    if (!ctx.step(P, c, lambda, stage)) throw InfeasibleMultiplier(stage);
    return StageResult{std::move(P), c};
}

RiccatiSolution backward_pass(const MultiplierSchedule& lambdas,
                              const model::ValidatedProblem& problem, Variant variant) {
    const int N = problem.N;
    if (lambdas.horizon() != N) {
        throw DimensionMismatch("multiplier schedule must have length N+1 = " + std::to_string(N + 1));
    }
    detail::StageContext ctx(problem, variant);

    RiccatiSolution sol;
    sol.P.assign(static_cast<std::size_t>(N) + 2, Eigen::MatrixXd());
    sol.c.assign(static_cast<std::size_t>(N) + 1, 0.0);
    sol.P[static_cast<std::size_t>(N) + 1] = problem.Q_terminal;
    sol.feasible = true;

    Eigen::MatrixXd P = problem.Q_terminal;
    for (int t = N; t >= 0; --t) {
        double c = 0.0;
        if (!ctx.step(P, c, lambdas.lambdas[static_cast<std::size_t>(t)], t)) {
            // P_t and below were not produced; their slots stay empty.
            sol.feasible = false;
            sol.first_infeasible_stage = t;
            return sol;
        }
        sol.P[static_cast<std::size_t>(t)] = P;
        sol.c[static_cast<std::size_t>(t)] = c;
    }
    return sol;
}

Controller gains(const MultiplierSchedule& lambdas, const RiccatiSolution& solution,
                 const model::ValidatedProblem& problem, Variant variant,
                 const GainOptions& opts) {
    if (!solution.feasible) throw InfeasibleSolution();
    const int N = problem.N;

    Controller ctrl;
    ctrl.gains.reserve(static_cast<std::size_t>(N) + 1);
    ctrl.lambdas = lambdas;
    ctrl.P0 = solution.P.front();
    ctrl.P = solution.P;

    if (variant == Variant::WorstPerformance) {
        for (int t = 0; t <= N; ++t) {
            ctrl.gains.emplace_back(Eigen::MatrixXd::Zero(problem.m, problem.n));
        }
        return ctrl;
    }

    detail::StageContext ctx(problem, variant);
    Eigen::LLT<Eigen::MatrixXd> r_llt(problem.R);
    const Eigen::MatrixXd I_n = Eigen::MatrixXd::Identity(problem.n, problem.n);

    for (int t = 0; t <= N; ++t) {
        const double lambda = lambdas.lambdas[static_cast<std::size_t>(t)];
        const Eigen::MatrixXd& P_next = solution.P[static_cast<std::size_t>(t) + 1];
        Eigen::LLT<Eigen::MatrixXd> p_llt(P_next);
        if (p_llt.info() != Eigen::Success) throw InfeasibleSolution();
        Eigen::MatrixXd inner = p_llt.solve(I_n) + ctx.control_term(lambda) - problem.V / lambda;
        inner = 0.5 * (inner + inner.transpose());
        Eigen::LLT<Eigen::MatrixXd> inner_llt(inner);
        if (inner_llt.info() != Eigen::Success) throw InfeasibleMultiplier(t);
        const Eigen::MatrixXd core = inner_llt.solve(problem.A);

        Eigen::MatrixXd K;
        if (variant == Variant::D2LQG_E2 && opts.e2_leading_regularized) {
            const Eigen::MatrixXd& E2 = *problem.E2;
            Eigen::MatrixXd Rt = problem.R + lambda * (E2.transpose() * E2);
            Eigen::LLT<Eigen::MatrixXd> rt_llt(Rt);
            K = rt_llt.solve(problem.B.transpose() * core);
        } else {
            K = r_llt.solve(problem.B.transpose() * core);
        }
        ctrl.gains.push_back(std::move(K));
    }
    return ctrl;
}

}  // namespace d2lqg::riccati
