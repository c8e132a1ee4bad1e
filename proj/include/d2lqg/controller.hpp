#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace d2lqg {

// Multiplier schedule (lambda_0..lambda_N); the omega_t of the worst-performance
// analysis use the same container.
struct MultiplierSchedule {
    std::vector<double> lambdas;

    int horizon() const { return static_cast<int>(lambdas.size()) - 1; }
};

enum class Method { LQG, DLQG, D2LQG, D2LQG_E2 };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

// Time-indexed state-feedback policy u_t = -K_t x_t together with its
// synthesis provenance.
struct Controller {
    std::vector<Eigen::MatrixXd> gains;  // K_t, m x n, t = 0..N
    Method method = Method::LQG;
    std::optional<MultiplierSchedule> lambdas;        // lambda* where applicable
    std::optional<double> value;                      // solver objective W_0 at the optimum
    std::optional<Eigen::MatrixXd> P0;                // Riccati matrix at t = 0
    std::optional<std::vector<Eigen::MatrixXd>> P;    // full P_t sequence, t = 0..N+1
    bool suboptimal_bound = false;                    // set when value is only an upper bound
    std::string provenance;                           // solve options / method notes

    int horizon() const { return static_cast<int>(gains.size()) - 1; }
};

}  // namespace d2lqg
