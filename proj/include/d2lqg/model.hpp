#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "d2lqg/errors.hpp"

namespace d2lqg::model {

// Per-stage ambiguity tolerance d_t, stored as a default value plus explicit
// interval overrides (closed intervals [from, to] in stage index).
struct DSchedule {
    struct Override {
        int from = 0;
        int to = 0;
        double value = 0.0;
    };

    double default_value = 0.0;
    std::vector<Override> overrides;

    double at(int t) const {
        double v = default_value;
        for (const auto& o : overrides) {
            if (t >= o.from && t <= o.to) v = o.value;
        }
        return v;
    }

    // Expand to the per-stage vector d_0..d_N.
    std::vector<double> expand(int horizon) const {
        std::vector<double> d(static_cast<std::size_t>(horizon) + 1);
        for (int t = 0; t <= horizon; ++t) d[static_cast<std::size_t>(t)] = at(t);
        return d;
    }
};

// Raw problem data as supplied by the caller; validated into a ValidatedProblem.
struct RawProblem {
    Eigen::MatrixXd A;           // n x n state transition
    Eigen::MatrixXd B;           // n x m input map
    Eigen::MatrixXd V;           // n x n nominal noise covariance, SPD
    Eigen::MatrixXd Q;           // n x n stage state weight, PSD
    Eigen::MatrixXd Q_terminal;  // n x n terminal weight, SPD
    Eigen::MatrixXd R;           // m x m input weight, SPD
    Eigen::MatrixXd E1;          // p x n state-dependent budget map
    std::optional<Eigen::MatrixXd> E2;  // p x m control-dependent budget map; absent selects the
                                        // exact synthesis path, present selects the upper-bound one
    DSchedule d;
    int horizon = 0;             // N; stages run t = 0..N, terminal weight applies at N+1
    Eigen::VectorXd x0;          // deterministic initial state
};

// Immutable after construction; safe to share across threads.
class ValidatedProblem {
  public:
    Eigen::MatrixXd A, B, V, Q, Q_terminal, R, E1;
    std::optional<Eigen::MatrixXd> E2;
    DSchedule d_schedule;
    std::vector<double> d;  // expanded schedule, length N+1
    int N = 0;
    Eigen::VectorXd x0;

    int n = 0;  // state dimension
    int m = 0;  // input dimension
    int p = 0;  // budget-map output dimension

    // Precomputed symmetric square root of V (used by the Riccati feasibility tests).
    Eigen::MatrixXd V_sqrt;

  private:
    ValidatedProblem() = default;
    friend ValidatedProblem validate(const RawProblem& raw);
};

// Radius of the per-stage ambiguity ball: d_t + 0.5 ||E1 x + E2 u||^2.
struct AmbiguityRadius {
    double d = 0.0;
    Eigen::MatrixXd E1;
    std::optional<Eigen::MatrixXd> E2;

    double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
        Eigen::VectorXd z = E1 * x;
        if (E2) z += *E2 * u;
        return d + 0.5 * z.squaredNorm();
    }
};

AmbiguityRadius radius_at(const ValidatedProblem& problem, int t);

// Checks dimensions, definiteness classes, strict positivity of the tolerance
// schedule, observability of (A, Q) and the E1'E2 = 0 cross condition.
// Matrices are symmetrized before the definiteness checks; relative asymmetry
// beyond 1e-8 is rejected rather than silently fixed.
ValidatedProblem validate(const RawProblem& raw);

// Relative tolerance used for the symmetry check.
inline constexpr double kSymmetryTol = 1e-8;

// Definiteness margin for an n x n symmetric matrix M: a positive-definite
// check requires min eig > tol, a semidefinite one min eig > -tol, where
// tol = definiteness_tol(M).
double definiteness_tol(const Eigen::MatrixXd& M);

}  // namespace d2lqg::model
