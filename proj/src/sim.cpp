#include "d2lqg/sim.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cstdlib>
#include <thread>

#include "d2lqg/errors.hpp"

namespace d2lqg::sim {

namespace {

// Per-run sampling state: covariance factors are prepared once, not per draw.
class NoiseSampler {
  public:
    NoiseSampler(const NoiseModel& noise, const model::ValidatedProblem& problem)
        : noise_(&noise), n_(problem.n) {
        if (const auto* g = std::get_if<NominalGaussian>(&noise)) {
            chol_.push_back(llt_lower(g->V));
        } else if (const auto* wc = std::get_if<WorstCaseNoise>(&noise)) {
            const int N = static_cast<int>(wc->lambdas.size()) - 1;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n_, n_);
            Eigen::LLT<Eigen::MatrixXd> v_llt(wc->V);
            if (v_llt.info() != Eigen::Success) throw NotPositiveDefinite("V");
            for (int t = 0; t <= N; ++t) {
                const Eigen::MatrixXd& P_next = wc->P[static_cast<std::size_t>(t) + 1];
                Eigen::MatrixXd M = v_llt.solve(I) - P_next / wc->lambdas[static_cast<std::size_t>(t)];
                M = 0.5 * (M + M.transpose());
                Eigen::LLT<Eigen::MatrixXd> m_llt(M);
                if (m_llt.info() != Eigen::Success) throw InfeasibleMultiplier(t);
                Eigen::MatrixXd cov = m_llt.solve(I);
                cov = 0.5 * (cov + cov.transpose());
                chol_.push_back(llt_lower(cov));
                mean_map_.push_back(m_llt.solve(P_next / wc->lambdas[static_cast<std::size_t>(t)]));
            }
        } else if (const auto* lft = std::get_if<LftNoise>(&noise)) {
            chol_.push_back(llt_lower(lft->base_cov));
        }
    }

    Eigen::VectorXd sample(const rng::SubStream& stream, int t, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) const {
        const auto stage = static_cast<std::uint64_t>(t);
        if (std::holds_alternative<ZeroNoise>(*noise_)) {
            return Eigen::VectorXd::Zero(n_);
        }
        if (std::holds_alternative<NominalGaussian>(*noise_)) {
            return chol_[0] * stream.normals(stage, n_);
        }
        if (const auto* cu = std::get_if<ComponentUniform>(noise_)) {
            if (t < cu->window_lo || t > cu->window_hi) return Eigen::VectorXd::Zero(n_);
            return stream.uniforms(stage, cu->bounds);
        }
        if (const auto* wc = std::get_if<WorstCaseNoise>(noise_)) {
            const Eigen::VectorXd drift = wc->A * x + wc->B * u;
            return mean_map_[static_cast<std::size_t>(t)] * drift +
                   chol_[static_cast<std::size_t>(t)] * stream.normals(stage, n_);
        }
        const auto& lft = std::get<LftNoise>(*noise_);
        const Eigen::VectorXd z = lft.E1 * x + lft.E2 * u;
        return lft.Delta * z + chol_[0] * stream.normals(stage, n_);
    }

  private:
    static Eigen::MatrixXd llt_lower(const Eigen::MatrixXd& cov) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) throw NotPositiveDefinite("noise covariance");
        return llt.matrixL();
    }

    const NoiseModel* noise_;
    int n_;
    std::vector<Eigen::MatrixXd> chol_;
    std::vector<Eigen::MatrixXd> mean_map_;
};

double run_rollout(const Controller& controller, const model::ValidatedProblem& problem,
                   const DynamicsSpec& dyn, const NoiseSampler& sampler,
                   const rng::SubStream& stream, Trajectory* traj) {
    const int N = problem.N;
    Eigen::VectorXd x = dyn.x0;
    double cost = 0.0;
    for (int t = 0; t <= N; ++t) {
        const Eigen::VectorXd u = -(controller.gains[static_cast<std::size_t>(t)] * x);
        const double stage_cost = 0.5 * (x.dot(problem.Q * x) + u.dot(problem.R * u));
        cost += stage_cost;
        const Eigen::VectorXd v = sampler.sample(stream, t, x, u);
        if (traj) {
            traj->X.col(t) = x;
            traj->U.col(t) = u;
            traj->Vn.col(t) = v;
            traj->stage_costs(t) = stage_cost;
        }
        x = dyn.A_true * x + dyn.B_true * u + v;
    }
    const double terminal = 0.5 * x.dot(problem.Q_terminal * x);
    cost += terminal;
    if (traj) {
        traj->X.col(N + 1) = x;
        traj->stage_costs(N + 1) = terminal;
    }
    return cost;
}

}  // namespace

NoiseModel make_worst_case_noise(const Controller& controller,
                                 const model::ValidatedProblem& problem) {
    if (!controller.lambdas || !controller.P) throw MissingLambdas();
    WorstCaseNoise wc;
    wc.lambdas = controller.lambdas->lambdas;
    wc.P = *controller.P;
    wc.V = problem.V;
    wc.A = problem.A;
    wc.B = problem.B;
    return wc;
}

NoiseModel make_lft_noise(const Eigen::MatrixXd& Delta, const model::ValidatedProblem& problem) {
    if (Delta.rows() != problem.n || Delta.cols() != problem.p) {
        throw DimensionMismatch("Delta must be n x p");
    }
    LftNoise lft;
    lft.Delta = Delta;
    lft.E1 = problem.E1;
    lft.E2 = problem.E2 ? *problem.E2 : Eigen::MatrixXd::Zero(problem.p, problem.m);
    lft.base_cov = problem.V;
    return lft;
}

RolloutResult rollout(const Controller& controller, const model::ValidatedProblem& problem,
                      const DynamicsSpec& dyn, const NoiseModel& noise,
                      const rng::SubStream& stream, bool record_trajectory) {
    if (controller.horizon() != problem.N) {
        throw DimensionMismatch("controller horizon does not match the problem");
    }
    if (dyn.A_true.rows() != problem.n || dyn.B_true.cols() != problem.m) {
        throw DimensionMismatch("dynamics dimensions do not match the problem");
    }
    NoiseSampler sampler(noise, problem);

    RolloutResult result;
    Trajectory* traj = nullptr;
    if (record_trajectory) {
        result.trajectory.emplace();
        result.trajectory->X.resize(problem.n, problem.N + 2);
        result.trajectory->U.resize(problem.m, problem.N + 1);
        result.trajectory->Vn.resize(problem.n, problem.N + 1);
        result.trajectory->stage_costs.resize(problem.N + 2);
        traj = &*result.trajectory;
    }
    result.cost = run_rollout(controller, problem, dyn, sampler, stream, traj);
    return result;
}

double expected_cost_exact(const Controller& controller, const model::ValidatedProblem& problem) {
    const int N = problem.N;
    Eigen::VectorXd mean = problem.x0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(problem.n, problem.n);
    double cost = 0.0;
    for (int t = 0; t <= N; ++t) {
        const Eigen::MatrixXd& K = controller.gains[static_cast<std::size_t>(t)];
        const Eigen::MatrixXd W = problem.Q + K.transpose() * problem.R * K;
        cost += 0.5 * (mean.dot(W * mean) + (W * cov).trace());
        const Eigen::MatrixXd A_cl = problem.A - problem.B * K;
        mean = A_cl * mean;
        cov = A_cl * cov * A_cl.transpose() + problem.V;
        cov = 0.5 * (cov + cov.transpose());
    }
    cost += 0.5 * (mean.dot(problem.Q_terminal * mean) + (problem.Q_terminal * cov).trace());
    return cost;
}

int resolve_threads(int requested) {
    int threads = requested;
    if (threads <= 0) {
        if (const char* env = std::getenv("D2LQG_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
    }
    return std::max(1, threads);
}

std::string controller_label(const Controller& c) {
    return method_name(c.method);
}

MonteCarloResult monte_carlo(const std::vector<const Controller*>& controllers,
                             const model::ValidatedProblem& problem, const DynamicsSpec& dyn,
                             const NoiseModel& noise, int trials, std::uint64_t seed,
                             int threads) {
    if (trials < 1) throw DimensionMismatch("trials must be >= 1");
    const std::size_t n_ctrl = controllers.size();
    NoiseSampler sampler(noise, problem);

    std::vector<std::vector<double>> costs(n_ctrl, std::vector<double>(static_cast<std::size_t>(trials)));

    const int n_threads = std::min(resolve_threads(threads), trials);
    auto worker = [&](int first, int stride) {
        for (int trial = first; trial < trials; trial += stride) {
            rng::SubStream stream(seed, static_cast<std::uint64_t>(trial));
            for (std::size_t ci = 0; ci < n_ctrl; ++ci) {
                costs[ci][static_cast<std::size_t>(trial)] =
                    run_rollout(*controllers[ci], problem, dyn, sampler, stream, nullptr);
            }
        }
    };
    if (n_threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker, i, n_threads);
        for (auto& th : pool) th.join();
    }

    MonteCarloResult out;
    out.per_controller.reserve(n_ctrl);
    for (std::size_t ci = 0; ci < n_ctrl; ++ci) {
        SimulationResult r;
        r.name = controller_label(*controllers[ci]);
        r.costs = std::move(costs[ci]);
        double sum = 0.0;
        for (double v : r.costs) sum += v;  // trial-index order
        r.mean = sum / static_cast<double>(trials);
        r.seed = seed;
        r.rng_id = rng::kGeneratorId;
        out.per_controller.push_back(std::move(r));
    }
    return out;
}

PairedRatios paired_ratios(const SimulationResult& a, const SimulationResult& b) {
    if (a.costs.size() != b.costs.size() || a.costs.empty()) {
        throw DimensionMismatch("paired ratios need equal-length, nonempty cost vectors");
    }
    PairedRatios r;
    r.r_min = std::numeric_limits<double>::infinity();
    r.r_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.costs.size(); ++i) {
        const double ratio = a.costs[i] / b.costs[i];
        r.r_min = std::min(r.r_min, ratio);
        r.r_max = std::max(r.r_max, ratio);
    }
    return r;
}

LftSweepResult lft_sweep(const std::vector<const Controller*>& controllers,
                         const model::ValidatedProblem& problem,
                         const std::vector<double>& c_values, int trials, std::uint64_t seed,
                         int threads) {
    LftSweepResult out;
    out.c_values = c_values;
    out.mean_costs.resize(static_cast<Eigen::Index>(controllers.size()),
                          static_cast<Eigen::Index>(c_values.size()));
    for (const Controller* c : controllers) out.controller_names.push_back(controller_label(*c));

    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(problem.n, problem.p);
    const DynamicsSpec dyn = DynamicsSpec::nominal(problem);
    for (std::size_t k = 0; k < c_values.size(); ++k) {
        const NoiseModel noise = make_lft_noise(c_values[k] * ones, problem);
        const MonteCarloResult mc = monte_carlo(controllers, problem, dyn, noise, trials, seed, threads);
        for (std::size_t ci = 0; ci < controllers.size(); ++ci) {
            out.mean_costs(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(k)) =
                mc.per_controller[ci].mean;
        }
    }
    return out;
}

}  // namespace d2lqg::sim
