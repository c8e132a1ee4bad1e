#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "d2lqg/controller.hpp"
#include "d2lqg/model.hpp"
#include "d2lqg/rng.hpp"

namespace d2lqg::sim {

// True dynamics used in a rollout; may differ from the nominal model.
struct DynamicsSpec {
    Eigen::MatrixXd A_true;
    Eigen::MatrixXd B_true;
    Eigen::VectorXd x0;

    static DynamicsSpec nominal(const model::ValidatedProblem& problem) {
        return DynamicsSpec{problem.A, problem.B, problem.x0};
    }
};

struct ZeroNoise {};

struct NominalGaussian {
    Eigen::MatrixXd V;
};

// Componentwise v_i ~ U(0, bounds_i) inside the closed stage window, 0 outside.
struct ComponentUniform {
    Eigen::VectorXd bounds;
    int window_lo = 0;
    int window_hi = 0;
};

// Least-favorable conditional Gaussian: mean shift from the nominal drift
// A x + B u, inflated covariance (V^{-1} - P_{t+1}/lambda_t)^{-1}.
struct WorstCaseNoise {
    std::vector<double> lambdas;          // lambda*_t, t = 0..N
    std::vector<Eigen::MatrixXd> P;       // P*_t, t = 0..N+1
    Eigen::MatrixXd V;
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

// v_t = Delta z_t + vbar_t with z_t = E1 x + E2 u and vbar ~ N(0, base_cov).
struct LftNoise {
    Eigen::MatrixXd Delta;  // n x p
    Eigen::MatrixXd E1;     // p x n
    Eigen::MatrixXd E2;     // p x m (zero when absent)
    Eigen::MatrixXd base_cov;
};

using NoiseModel = std::variant<ZeroNoise, NominalGaussian, ComponentUniform, WorstCaseNoise, LftNoise>;

// Builds the worst-case adversary from a synthesized controller; requires the
// multiplier schedule and P sequence (MissingLambdas otherwise).
NoiseModel make_worst_case_noise(const Controller& controller,
                                 const model::ValidatedProblem& problem);

// Delta as a dense n x p map applied to z_t = E1 x + E2 u, base noise N(0, V).
NoiseModel make_lft_noise(const Eigen::MatrixXd& Delta, const model::ValidatedProblem& problem);

struct Trajectory {
    Eigen::MatrixXd X;             // n x (N+2)
    Eigen::MatrixXd U;             // m x (N+1)
    Eigen::MatrixXd Vn;            // n x (N+1)
    Eigen::VectorXd stage_costs;   // N+2 entries; last is the terminal term
};

struct RolloutResult {
    double cost = 0.0;
    std::optional<Trajectory> trajectory;
};

// Closed-loop rollout: u_t = -K_t x_t, x_{t+1} = A_true x_t + B_true u_t + v_t,
// cost accumulated with the problem's weights. Deterministic given the stream.
RolloutResult rollout(const Controller& controller, const model::ValidatedProblem& problem,
                      const DynamicsSpec& dyn, const NoiseModel& noise,
                      const rng::SubStream& stream, bool record_trajectory = false);

// Exact expected closed-loop cost under nominal dynamics and N(0, V) noise,
// by mean/covariance propagation.
double expected_cost_exact(const Controller& controller, const model::ValidatedProblem& problem);

struct SimulationResult {
    std::string name;
    std::vector<double> costs;  // per trial, trial-index order
    double mean = 0.0;
    std::uint64_t seed = 0;
    std::string rng_id;
};

struct MonteCarloResult {
    std::vector<SimulationResult> per_controller;
};

struct PairedRatios {
    double r_min = 0.0;
    double r_max = 0.0;
};

// Paired Monte Carlo: every controller sees the same per-trial noise draws
// (common random numbers via the counter-based substreams). Trials may run in
// parallel; the reduction is in trial-index order, so results are independent
// of thread count.
MonteCarloResult monte_carlo(const std::vector<const Controller*>& controllers,
                             const model::ValidatedProblem& problem, const DynamicsSpec& dyn,
                             const NoiseModel& noise, int trials, std::uint64_t seed,
                             int threads = 0);

// Per-trial cost ratios a/b of two paired simulations.
PairedRatios paired_ratios(const SimulationResult& a, const SimulationResult& b);

struct LftSweepResult {
    std::vector<double> c_values;
    std::vector<std::string> controller_names;
    Eigen::MatrixXd mean_costs;  // controllers x c_values
};

// Expected closed-loop cost versus the LFT uncertainty scalar c, with
// Delta = c * ones(n, p), estimated by Monte Carlo with shared streams.
LftSweepResult lft_sweep(const std::vector<const Controller*>& controllers,
                         const model::ValidatedProblem& problem,
                         const std::vector<double>& c_values, int trials, std::uint64_t seed,
                         int threads = 0);

// Thread cap: explicit argument, else the D2LQG_THREADS environment variable,
// else hardware concurrency.
int resolve_threads(int requested);

std::string controller_label(const Controller& c);

}  // namespace d2lqg::sim
