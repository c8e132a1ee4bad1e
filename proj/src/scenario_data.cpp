#include "d2lqg/scenario.hpp"

namespace d2lqg::scenario {

// Inverted pendulum on a cart, discretized with zero-order hold at Ts = 0.2 s
// (cart mass 3 kg, pendulum mass 1.5 kg, half-length 2 m, g = 9.8 m/s^2).
// The transition matrices carry full precision; rounded versions lose the
// benchmark's reference costs.
std::string pendulum_config_text() {
    return R"json({
  "name": "pendulum",
  "problem": {
    "A": [[1.0996111610372962, 0.2065976596059380, 0.0, 0.0],
          [1.0123285320690962, 1.0996111610372962, 0.0, 0.0],
          [-0.0664074406915307, -0.0043984397372920, 1.0, 0.2],
          [-0.6748856880460642, -0.0664074406915307, 0.0, 1.0]],
    "B": [[-0.0022587564861065],
          [-0.0229552955117709],
          [0.0059502821018488],
          [0.0597479747856250]],
    "V": [[0.0011104, 0.0, 0.0, 0.0],
          [0.0, 0.005552, 0.0, 0.0],
          [0.0, 0.0, 0.0011104, 0.0],
          [0.0, 0.0, 0.0, 0.005552]],
    "Q": [[10.0, 0.0, 0.0, 0.0],
          [0.0, 1.0, 0.0, 0.0],
          [0.0, 0.0, 10.0, 0.0],
          [0.0, 0.0, 0.0, 1.0]],
    "Q_terminal": [[10.0, 0.0, 0.0, 0.0],
                   [0.0, 1.0, 0.0, 0.0],
                   [0.0, 0.0, 10.0, 0.0],
                   [0.0, 0.0, 0.0, 1.0]],
    "R": [[1.0]],
    "E1": [[1.15, 0.0, 1.15, 0.0]],
    "x0": [0.1, -0.1, 0.05, 0.02]
  },
  "horizon": 100,
  "d": {
    "default": 0.001,
    "overrides": [{"from": 15, "to": 45, "value": 0.2}]
  },
  "solver": {"tol_rel": 1e-9, "max_sweeps": 200, "kappa_init": 3.0, "inner_tol": 1e-10},
  "simulation": {
    "trials": 1000,
    "seed": 20240,
    "noise": "component_uniform",
    "uniform_bounds": [0.0, 0.0125, 0.0, 0.125],
    "window": [15, 45],
    "delta_A": [[0.0269, 0.0316, -0.0243, 0.0288],
                [-0.0296, -0.0290, -0.0163, -0.0312],
                [0.0332, 0.0046, 0.0348, -0.0093],
                [-0.0246, -0.0042, -0.0284, 0.0138]]
  }
})json";
}

// Three-state LFT uncertainty benchmark: control-dependent ambiguity budget
// z_t = 0.5 u_t, near-zero constant tolerance.
std::string lft3_config_text() {
    return R"json({
  "name": "lft3",
  "problem": {
    "A": [[0.5773, -0.6335, -0.0457],
          [0.5477, 1.7583, 0.0524],
          [-0.4011, -0.4754, 1.0043]],
    "B": [[0.3212], [0.3689], [-0.2741]],
    "V": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    "Q": [[0.0025, 0.0025, 0.0025], [0.0025, 0.0025, 0.0025], [0.0025, 0.0025, 0.0025]],
    "Q_terminal": [[0.1, 0.0, 0.0], [0.0, 0.1, 0.0], [0.0, 0.0, 0.1]],
    "R": [[0.001]],
    "E1": [[0.0, 0.0, 0.0]],
    "E2": [[0.5]],
    "x0": [0.5, 0.1, -0.7]
  },
  "horizon": 99,
  "d": {"default": 1e-10, "overrides": []},
  "solver": {"tol_rel": 1e-9, "max_sweeps": 200, "kappa_init": 3.0, "inner_tol": 1e-10},
  "simulation": {"trials": 1000, "seed": 61, "noise": "lft", "lft_c": 0.0}
})json";
}

}  // namespace d2lqg::scenario
