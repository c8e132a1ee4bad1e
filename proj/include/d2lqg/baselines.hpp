#pragma once

#include "d2lqg/controller.hpp"
#include "d2lqg/dual_opt.hpp"
#include "d2lqg/model.hpp"

namespace d2lqg::baselines {

// Standard LQG synthesis (noise-independent gains):
//   P_t = Q + A'(P_{t+1}^{-1} + B R^{-1} B')^{-1} A,   P_{N+1} = Q_terminal
//   K_t = R^{-1} B'(P_{t+1}^{-1} + B R^{-1} B')^{-1} A.
Controller synth_lqg(const model::ValidatedProblem& problem);

// Single-constraint distributionally robust baseline: the multiplier schedule
// is constrained to a constant lambda_t = lambda (one budget d = sum_t d_t over
// the horizon), minimized over the scalar lambda by golden section.
Controller synth_dlqg(const model::ValidatedProblem& problem,
                      const dual_opt::SolveOptions& opts = {});

}  // namespace d2lqg::baselines
