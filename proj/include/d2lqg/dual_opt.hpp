#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "d2lqg/controller.hpp"
#include "d2lqg/model.hpp"
#include "d2lqg/riccati.hpp"

namespace d2lqg::dual_opt {

struct SolveOptions {
    double tol_rel = 1e-9;      // sweep convergence: relative W0 decrease
    int max_sweeps = 200;
    double kappa_init = 3.0;    // backward initialization margin; escalated x10 up to 1e4
    double inner_tol = 1e-10;   // golden-section relative interval width
};

struct SolveReport {
    MultiplierSchedule lambdas_opt;
    double value = 0.0;        // W0 at the optimum, re-evaluated through eval_W0
    int iterations = 0;        // full coordinate sweeps performed
    std::int64_t inner_evals = 0;  // W0 evaluations (including partial-pass probes)
    bool converged = false;
    double gradient_norm = 0.0;  // max scaled |dW0/dlambda_t| by central differences
};

// Dual objective W0(x, lambda) = 0.5 x'P0 x + sum_t c_t; +infinity when the
// backward pass is infeasible (the line search probes freely).
double eval_W0(const MultiplierSchedule& lambdas, const model::ValidatedProblem& problem,
               riccati::Variant variant, const Eigen::VectorXd& x);

// Minimizes W0 over the single coordinate lambda_j, the others held fixed.
// Returns the updated lambda_j; the minimized W0 never exceeds the incoming one.
double minimize_coordinate(int j, const MultiplierSchedule& lambdas,
                           const model::ValidatedProblem& problem, riccati::Variant variant,
                           const Eigen::VectorXd& x, const SolveOptions& opts = {});

// Feasible starting schedule, built backward with lambda_t = kappa * floor_t.
// Escalates kappa by x10 up to 1e4 before throwing InitializationFailed.
MultiplierSchedule initial_schedule(const model::ValidatedProblem& problem,
                                    riccati::Variant variant, const SolveOptions& opts = {});

// Cyclic coordinate descent over j = 0..N until the per-sweep relative decrease
// of W0 falls below tol_rel or max_sweeps is reached.
SolveReport coordinate_descent(const model::ValidatedProblem& problem, riccati::Variant variant,
                               const Eigen::VectorXd& x, const SolveOptions& opts = {});

// Full synthesis at x = x0: coordinate descent, backward pass, gains.
Controller synth_d2lqg(const model::ValidatedProblem& problem, riccati::Variant variant,
                       const SolveOptions& opts = {});
Controller synth_d2lqg(const model::ValidatedProblem& problem, const SolveOptions& opts = {});

}  // namespace d2lqg::dual_opt
