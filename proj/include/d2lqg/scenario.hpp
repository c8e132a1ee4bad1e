#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2lqg/controller.hpp"
#include "d2lqg/dual_opt.hpp"
#include "d2lqg/model.hpp"
#include "d2lqg/sim.hpp"

namespace d2lqg::scenario {

inline constexpr const char* kToolVersion = "0.1.0";

enum class NoiseKind { Zero, NominalGaussian, ComponentUniform, WorstCase, Lft };

struct SimulationSpec {
    int trials = 1000;
    std::uint64_t seed = 1;
    NoiseKind noise = NoiseKind::Zero;
    Eigen::VectorXd uniform_bounds;                 // ComponentUniform
    int window_lo = 0, window_hi = 0;               // ComponentUniform
    std::optional<Eigen::MatrixXd> delta_A;         // perturbed dynamics A + dA
    double lft_c = 0.0;                             // Lft: Delta = c * ones(n, p)
};

// Parsed scenario: problem data plus solver and simulation options. The raw
// config bytes are kept for provenance hashing.
struct ScenarioConfig {
    model::RawProblem problem;
    dual_opt::SolveOptions solver;
    SimulationSpec simulation;
    std::string raw_text;
    std::string hash;  // fnv1a64 of raw_text

    model::ValidatedProblem validated() const { return model::validate(problem); }
};

// Parse a JSON config (matrices as row-major nested arrays). Throws
// ValidationError on malformed content.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);  // throws Error("io: ...") when unreadable

// Built-in scenarios backing the `repro` subcommand; both round-trip through
// parse_config so hashes and code paths match user-supplied files.
std::string pendulum_config_text();   // inverted pendulum on a cart
std::string lft3_config_text();       // 3-state LFT uncertainty benchmark
ScenarioConfig pendulum_scenario();
ScenarioConfig lft3_scenario();

std::string fnv1a64_hex(const std::string& bytes);

// Controller artifact file (structured text, diffable).
void save_controller(const std::string& path, const Controller& controller,
                     const std::string& config_hash);
struct LoadedController {
    Controller controller;
    std::string config_hash;
    std::string tool_version;
};
LoadedController load_controller(const std::string& path);

// CSV helpers.
void write_costs_csv(const std::string& path, const std::vector<sim::SimulationResult>& results);
void write_trajectory_csv(const std::string& path, const sim::Trajectory& traj);

}  // namespace d2lqg::scenario
