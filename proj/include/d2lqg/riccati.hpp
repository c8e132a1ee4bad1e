#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "d2lqg/controller.hpp"
#include "d2lqg/errors.hpp"
#include "d2lqg/model.hpp"

namespace d2lqg::riccati {

// Which backward recursion to run.
//  - WorstPerformance: no control term (the S_t / r_t / omega_t analysis).
//  - D2LQG:            control term B R^{-1} B'.
//  - D2LQG_E2:         control term B (R + lambda E2'E2)^{-1} B'.
// D2LQG with B = 0 and WorstPerformance produce identical numbers, as does
// D2LQG_E2 with E2 = 0 versus D2LQG.
enum class Variant { WorstPerformance, D2LQG, D2LQG_E2 };

Variant default_variant(const model::ValidatedProblem& problem);

struct RiccatiSolution {
    std::vector<Eigen::MatrixXd> P;  // t = 0..N+1; P[N+1] = Q_terminal
    std::vector<double> c;           // t = 0..N
    bool feasible = false;
    std::optional<int> first_infeasible_stage;

    double offset_sum() const;
};

// Relative margin below which a multiplier is treated as infeasible: the open
// set Lambda_t is approximated by lambda >= (1 + kFeasibilityMargin) * floor.
inline constexpr double kFeasibilityMargin = 1e-9;

// max eig(P_next V), computed on the symmetric similar form V^{1/2} P_next V^{1/2}.
double lambda_floor(const Eigen::MatrixXd& P_next, const Eigen::MatrixXd& V);

struct StageResult {
    Eigen::MatrixXd P;
    double c = 0.0;
};

// One backward stage update:
//   P_t = Q + lambda E1'E1 + A' (P_next^{-1} + Bterm - V/lambda)^{-1} A
//   c_t = -(lambda/2) ln det(I - P_next V / lambda) + lambda d_t
// with Bterm per variant. Throws InfeasibleMultiplier(stage) when lambda is at
// or below its floor (within the margin).
StageResult riccati_step(const Eigen::MatrixXd& P_next, double lambda, int stage,
                         const model::ValidatedProblem& problem, Variant variant);

// Full backward pass t = N..0. Infeasibility is encoded in the result, not
// thrown: the coordinate-descent line search probes infeasible points routinely.
RiccatiSolution backward_pass(const MultiplierSchedule& lambdas,
                              const model::ValidatedProblem& problem, Variant variant);

struct GainOptions {
    // The printed E2-variant gain uses a leading R^{-1}; this switch replaces it
    // with (R + lambda E2'E2)^{-1} for experimentation. Default off.
    bool e2_leading_regularized = false;
};

// Optimal gains K_t from a feasible solution (policy u_t = -K_t x_t).
Controller gains(const MultiplierSchedule& lambdas, const RiccatiSolution& solution,
                 const model::ValidatedProblem& problem, Variant variant,
                 const GainOptions& opts = {});

namespace detail {

// Per-problem constants reused across stage evaluations.
struct StageContext {
    const model::ValidatedProblem* problem = nullptr;
    Variant variant = Variant::D2LQG;
    Eigen::MatrixXd BRinvBt;   // B R^{-1} B' (D2LQG); zero (WorstPerformance)
    Eigen::MatrixXd E1tE1;     // E1'E1
    Eigen::MatrixXd I_n;

    StageContext(const model::ValidatedProblem& p, Variant v);

    // Control term of the inner matrix for a given multiplier.
    Eigen::MatrixXd control_term(double lambda) const;

    // In-place stage update; returns false when infeasible. P and c_out are
    // only modified on success.
    bool step(Eigen::MatrixXd& P, double& c_out, double lambda, int stage) const;
};

}  // namespace detail

}  // namespace d2lqg::riccati
