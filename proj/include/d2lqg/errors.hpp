#pragma once

#include <stdexcept>
#include <string>

namespace d2lqg {

// Base class for all errors raised by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem-data rejection. The message names the violated assumption.
struct ValidationError : Error {
    using Error::Error;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct NotSymmetric : ValidationError {
    using ValidationError::ValidationError;
};

struct NotPositiveDefinite : ValidationError {
    explicit NotPositiveDefinite(const std::string& which)
        : ValidationError(which + " is not in the required definiteness class"), matrix(which) {}
    std::string matrix;
};

struct NotObservable : ValidationError {
    NotObservable() : ValidationError("pair (A, Q) is not observable") {}
};

struct NonPositiveTolerance : ValidationError {
    explicit NonPositiveTolerance(int stage)
        : ValidationError("ambiguity tolerance d_t must be > 0 at stage t = " + std::to_string(stage)),
          stage(stage) {}
    int stage;
};

struct CrossTermNotZero : ValidationError {
    CrossTermNotZero() : ValidationError("E1'E2 must vanish when E2 is present") {}
};

// Solver-side failures.
struct SolverError : Error {
    using Error::Error;
};

struct InfeasibleMultiplier : SolverError {
    explicit InfeasibleMultiplier(int stage)
        : SolverError("multiplier at or below its feasibility floor at stage " + std::to_string(stage)),
          stage(stage) {}
    int stage;
};

struct InfeasibleSolution : SolverError {
    InfeasibleSolution() : SolverError("gains requested for an infeasible Riccati solution") {}
};

struct InitializationFailed : SolverError {
    InitializationFailed() : SolverError("no feasible initial multiplier schedule found") {}
};

struct NoFiniteValueFound : SolverError {
    explicit NoFiniteValueFound(int stage)
        : SolverError("coordinate search found no finite value at stage " + std::to_string(stage)),
          stage(stage) {}
    int stage;
};

// Gaussian-integral utilities.
struct DivergentTilt : Error {
    DivergentTilt() : Error("tilted Gaussian diverges: Sigma^{-1} - G is not positive definite") {}
};

struct DivergentIntegral : Error {
    DivergentIntegral() : Error("Gaussian integral diverges: quadratic form is not positive definite") {}
};

// CLI-level.
struct MissingLambdas : Error {
    MissingLambdas() : Error("controller carries no multiplier schedule (not a d2lqg synthesis?)") {}
};

}  // namespace d2lqg
