#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "d2lqg/baselines.hpp"
#include "d2lqg/dual_opt.hpp"
#include "d2lqg/scenario.hpp"
#include "d2lqg/sim.hpp"
#include "d2lqg/worst_case.hpp"

namespace {

using namespace d2lqg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

Controller synth_by_method(const scenario::ScenarioConfig& cfg,
                           const model::ValidatedProblem& problem, const std::string& method) {
    if (method == "lqg") return baselines::synth_lqg(problem);
    if (method == "dlqg") return baselines::synth_dlqg(problem, cfg.solver);
    if (method == "d2lqg") return dual_opt::synth_d2lqg(problem, cfg.solver);
    throw ValidationError("unknown method '" + method + "' (expected lqg|dlqg|d2lqg)");
}

sim::NoiseModel noise_from_spec(const scenario::ScenarioConfig& cfg,
                                const model::ValidatedProblem& problem,
                                const Controller* wc_source) {
    switch (cfg.simulation.noise) {
        case scenario::NoiseKind::Zero:
            return sim::ZeroNoise{};
        case scenario::NoiseKind::NominalGaussian:
            return sim::NominalGaussian{problem.V};
        case scenario::NoiseKind::ComponentUniform: {
            if (cfg.simulation.uniform_bounds.size() != problem.n) {
                throw ValidationError("uniform_bounds must have length n");
            }
            return sim::ComponentUniform{cfg.simulation.uniform_bounds, cfg.simulation.window_lo,
                                         cfg.simulation.window_hi};
        }
        case scenario::NoiseKind::WorstCase: {
            if (!wc_source) throw MissingLambdas();
            return sim::make_worst_case_noise(*wc_source, problem);
        }
        case scenario::NoiseKind::Lft: {
            const Eigen::MatrixXd Delta =
                cfg.simulation.lft_c * Eigen::MatrixXd::Ones(problem.n, problem.p);
            return sim::make_lft_noise(Delta, problem);
        }
    }
    return sim::ZeroNoise{};
}

sim::DynamicsSpec dynamics_from_spec(const scenario::ScenarioConfig& cfg,
                                     const model::ValidatedProblem& problem) {
    sim::DynamicsSpec dyn = sim::DynamicsSpec::nominal(problem);
    if (cfg.simulation.delta_A) dyn.A_true = problem.A + *cfg.simulation.delta_A;
    return dyn;
}

int cmd_synth(const std::string& config_path, const std::string& method, const std::string& out) {
    const scenario::ScenarioConfig cfg = scenario::load_config(config_path);
    const model::ValidatedProblem problem = cfg.validated();
    const Controller ctrl = synth_by_method(cfg, problem, method);
    scenario::save_controller(out, ctrl, cfg.hash);
    std::cout << "method=" << method_name(ctrl.method) << " gains=" << ctrl.gains.size();
    if (ctrl.value) std::cout << " value=" << *ctrl.value;
    std::cout << " -> " << out << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& controller_paths,
                 const std::string& out_prefix, int trials_override,
                 std::uint64_t seed_override, bool have_seed, const std::string& noise_override,
                 bool force, bool write_traj) {
    scenario::ScenarioConfig cfg = scenario::load_config(config_path);
    const model::ValidatedProblem problem = cfg.validated();

    if (trials_override == 0) {
        std::cerr << "usage: --trials must be >= 1\n";
        return kExitUsage;
    }
    if (trials_override > 0) cfg.simulation.trials = trials_override;
    if (have_seed) cfg.simulation.seed = seed_override;
    if (!noise_override.empty()) {
        scenario::ScenarioConfig tmp = cfg;
        // reuse the parser's mapping
        if (noise_override == "zero") tmp.simulation.noise = scenario::NoiseKind::Zero;
        else if (noise_override == "nominal_gaussian") tmp.simulation.noise = scenario::NoiseKind::NominalGaussian;
        else if (noise_override == "component_uniform") tmp.simulation.noise = scenario::NoiseKind::ComponentUniform;
        else if (noise_override == "worst_case") tmp.simulation.noise = scenario::NoiseKind::WorstCase;
        else if (noise_override == "lft") tmp.simulation.noise = scenario::NoiseKind::Lft;
        else {
            std::cerr << "usage: unknown --noise '" << noise_override << "'\n";
            return kExitUsage;
        }
        cfg.simulation.noise = tmp.simulation.noise;
    }

    std::vector<Controller> loaded;
    for (const auto& path : controller_paths) {
        scenario::LoadedController lc = scenario::load_controller(path);
        if (lc.config_hash != cfg.hash && !force) {
            throw ValidationError("controller '" + path + "' was synthesized for a different config (" +
                                  lc.config_hash + " vs " + cfg.hash + "); pass --force to override");
        }
        if (lc.controller.horizon() != problem.N) {
            throw ValidationError("controller '" + path + "' horizon does not match the config");
        }
        loaded.push_back(std::move(lc.controller));
    }
    if (loaded.empty()) throw ValidationError("simulate needs at least one --controller");

    const Controller* wc_source = nullptr;
    for (const auto& c : loaded) {
        if (c.lambdas && c.P) {
            wc_source = &c;
            break;
        }
    }

    const sim::NoiseModel noise = noise_from_spec(cfg, problem, wc_source);
    const sim::DynamicsSpec dyn = dynamics_from_spec(cfg, problem);

    std::vector<const Controller*> ptrs;
    for (const auto& c : loaded) ptrs.push_back(&c);
    const sim::MonteCarloResult mc =
        sim::monte_carlo(ptrs, problem, dyn, noise, cfg.simulation.trials, cfg.simulation.seed);

    scenario::write_costs_csv(out_prefix + "_costs.csv", mc.per_controller);

    json summary;
    summary["config_hash"] = cfg.hash;
    summary["tool_version"] = scenario::kToolVersion;
    summary["trials"] = cfg.simulation.trials;
    summary["seed"] = cfg.simulation.seed;
    summary["rng"] = rng::kGeneratorId;
    for (const auto& r : mc.per_controller) summary["mean_cost"][r.name] = r.mean;
    for (std::size_t i = 0; i < mc.per_controller.size(); ++i) {
        for (std::size_t j = 0; j < mc.per_controller.size(); ++j) {
            if (i == j) continue;
            const auto pr = sim::paired_ratios(mc.per_controller[i], mc.per_controller[j]);
            const std::string key =
                mc.per_controller[i].name + "_over_" + mc.per_controller[j].name;
            summary["ratios"][key]["r_min"] = pr.r_min;
            summary["ratios"][key]["r_max"] = pr.r_max;
        }
    }
    std::ofstream sf(out_prefix + "_summary.json", std::ios::binary);
    if (!sf) throw Error("io: cannot write summary");
    sf << summary.dump(2) << "\n";

    if (write_traj) {
        const rng::SubStream stream(cfg.simulation.seed, 0);
        const sim::RolloutResult rr = sim::rollout(loaded.front(), problem, dyn, noise, stream, true);
        scenario::write_trajectory_csv(out_prefix + "_trajectory.csv", *rr.trajectory);
    }

    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_worstcase(const std::string& config_path, const std::string& controller_path,
                  const std::string& out, bool force) {
    const scenario::ScenarioConfig cfg = scenario::load_config(config_path);
    const model::ValidatedProblem problem = cfg.validated();
    scenario::LoadedController lc = scenario::load_controller(controller_path);
    if (lc.config_hash != cfg.hash && !force) {
        throw ValidationError("controller/config hash mismatch; pass --force to override");
    }
    const Controller& ctrl = lc.controller;
    if (!ctrl.lambdas || !ctrl.P) throw MissingLambdas();

    // Deterministic nominal closed-loop state sequence.
    const sim::DynamicsSpec dyn = sim::DynamicsSpec::nominal(problem);
    const rng::SubStream stream(0, 0);
    const sim::RolloutResult rr =
        sim::rollout(ctrl, problem, dyn, sim::ZeroNoise{}, stream, true);
    const sim::Trajectory& traj = *rr.trajectory;

    std::ofstream csv(out, std::ios::binary);
    if (!csv) throw Error("io: cannot write '" + out + "'");
    csv << "t,lambda,kl,radius,slack,cov_inflation_min_eig";
    for (int i = 1; i <= problem.n; ++i) csv << ",mean_" << i;
    for (int i = 1; i <= problem.n; ++i) {
        for (int j = 1; j <= problem.n; ++j) csv << ",cov_" << i << j;
    }
    csv << "\n";
    csv.precision(17);

    const worst_case::GaussianDensity nominal{Eigen::VectorXd::Zero(problem.n), problem.V};
    for (int t = 0; t <= problem.N; ++t) {
        const double lambda = ctrl.lambdas->lambdas[static_cast<std::size_t>(t)];
        const Eigen::VectorXd x = traj.X.col(t);
        const Eigen::VectorXd u = traj.U.col(t);
        const Eigen::VectorXd drift = problem.A * x + problem.B * u;
        const auto wc = worst_case::worst_case_distribution(
            (*ctrl.P)[static_cast<std::size_t>(t) + 1], lambda, problem.V, drift);
        const double kl = worst_case::gaussian_kl(wc, nominal);
        const double radius = model::radius_at(problem, t)(x, u);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(wc.cov - problem.V, Eigen::EigenvaluesOnly);
        csv << t << "," << lambda << "," << kl << "," << radius << "," << (radius - kl) << ","
            << es.eigenvalues().minCoeff();
        for (int i = 0; i < problem.n; ++i) csv << "," << wc.mean(i);
        for (int i = 0; i < problem.n; ++i) {
            for (int j = 0; j < problem.n; ++j) csv << "," << wc.cov(i, j);
        }
        csv << "\n";
    }
    std::cout << "worst-case report -> " << out << "\n";
    return kExitOk;
}

struct Table2Row {
    std::string name;
    double cost = 0.0;
};

std::vector<Table2Row> run_table2(const scenario::ScenarioConfig& cfg,
                                  const model::ValidatedProblem& problem) {
    const sim::DynamicsSpec dyn = sim::DynamicsSpec::nominal(problem);
    const rng::SubStream stream(0, 0);
    std::vector<Table2Row> rows;
    for (const std::string m : {"lqg", "dlqg", "d2lqg"}) {
        const Controller ctrl = synth_by_method(cfg, problem, m);
        const double cost = sim::rollout(ctrl, problem, dyn, sim::ZeroNoise{}, stream, false).cost;
        rows.push_back({m, cost});
    }
    return rows;
}

int cmd_repro(const std::string& which, const std::string& out_dir, int trials_override) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    if (which == "table2") {
        const auto cfg = scenario::pendulum_scenario();
        const auto problem = cfg.validated();
        const auto rows = run_table2(cfg, problem);
        std::ofstream csv(out_dir + "/table2.csv", std::ios::binary);
        if (!csv) throw Error("io: cannot write table2.csv");
        csv << "controller,cost\n";
        csv.precision(17);
        for (const auto& r : rows) {
            csv << r.name << "," << r.cost << "\n";
            std::cout << r.name << ": " << r.cost << "\n";
        }
        return kExitOk;
    }

    if (which == "table1") {
        auto cfg = scenario::pendulum_scenario();
        if (trials_override > 0) cfg.simulation.trials = trials_override;
        const auto problem = cfg.validated();
        if (!cfg.simulation.delta_A) throw ValidationError("pendulum scenario lacks delta_A");
        const Controller lqg = baselines::synth_lqg(problem);
        const Controller dlqg = baselines::synth_dlqg(problem, cfg.solver);
        const Controller d2 = dual_opt::synth_d2lqg(problem, cfg.solver);
        const sim::DynamicsSpec dyn = dynamics_from_spec(cfg, problem);
        const sim::NoiseModel noise = noise_from_spec(cfg, problem, &d2);
        const auto mc = sim::monte_carlo({&lqg, &dlqg, &d2}, problem, dyn, noise,
                                         cfg.simulation.trials, cfg.simulation.seed);
        scenario::write_costs_csv(out_dir + "/table1_costs.csv", mc.per_controller);
        const auto pr = sim::paired_ratios(mc.per_controller[1], mc.per_controller[2]);
        json summary;
        for (const auto& r : mc.per_controller) summary["mean_cost"][r.name] = r.mean;
        summary["r_min"] = pr.r_min;
        summary["r_max"] = pr.r_max;
        summary["trials"] = cfg.simulation.trials;
        summary["seed"] = cfg.simulation.seed;
        std::ofstream sf(out_dir + "/table1_summary.json", std::ios::binary);
        sf << summary.dump(2) << "\n";
        std::cout << summary.dump(2) << "\n";
        return kExitOk;
    }

    if (which == "fig3") {
        auto cfg = scenario::lft3_scenario();
        if (trials_override > 0) cfg.simulation.trials = trials_override;
        const auto problem = cfg.validated();
        const Controller lqg = baselines::synth_lqg(problem);
        const Controller dlqg = baselines::synth_dlqg(problem, cfg.solver);
        const Controller d2 = dual_opt::synth_d2lqg(problem, cfg.solver);
        std::vector<double> cs;
        const double cmax = 1.0 / std::sqrt(3.0);
        for (int i = 0; i < 21; ++i) cs.push_back(-cmax + 2.0 * cmax * i / 20.0);
        const auto sweep = sim::lft_sweep({&lqg, &dlqg, &d2}, problem, cs, cfg.simulation.trials,
                                          cfg.simulation.seed);
        std::ofstream csv(out_dir + "/fig3.csv", std::ios::binary);
        if (!csv) throw Error("io: cannot write fig3.csv");
        csv << "c";
        for (const auto& n : sweep.controller_names) csv << ",cost_" << n;
        csv << "\n";
        csv.precision(17);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            csv << cs[k];
            for (Eigen::Index ci = 0; ci < sweep.mean_costs.rows(); ++ci) {
                csv << "," << sweep.mean_costs(ci, static_cast<Eigen::Index>(k));
            }
            csv << "\n";
        }
        std::cout << "fig3 sweep -> " << out_dir << "/fig3.csv\n";
        return kExitOk;
    }

    if (which == "fig4") {
        auto cfg = scenario::lft3_scenario();
        if (trials_override > 0) cfg.simulation.trials = trials_override;
        const double dmax = 1.0 / std::sqrt(3.0);
        std::vector<double> ds;
        for (int i = 0; i < 21; ++i) ds.push_back(-dmax + 2.0 * dmax * i / 20.0);

        std::ofstream csv(out_dir + "/fig4.csv", std::ios::binary);
        if (!csv) throw Error("io: cannot write fig4.csv");
        csv << "d,norm_x0,cost_lqg,cost_dlqg,cost_d2lqg\n";
        csv.precision(17);
        for (double dd : ds) {
            scenario::ScenarioConfig local = cfg;
            local.problem.x0 = dd * Eigen::VectorXd::Ones(3);
            const auto problem = local.validated();
            const Controller lqg = baselines::synth_lqg(problem);
            const Controller dlqg = baselines::synth_dlqg(problem, local.solver);
            const Controller d2 = dual_opt::synth_d2lqg(problem, local.solver);
            const Eigen::MatrixXd Delta = -0.35 * Eigen::MatrixXd::Ones(problem.n, problem.p);
            const sim::NoiseModel noise = sim::make_lft_noise(Delta, problem);
            const auto mc = sim::monte_carlo({&lqg, &dlqg, &d2}, problem,
                                             sim::DynamicsSpec::nominal(problem), noise,
                                             local.simulation.trials, local.simulation.seed);
            csv << dd << "," << problem.x0.norm();
            for (const auto& r : mc.per_controller) csv << "," << r.mean;
            csv << "\n";
        }
        std::cout << "fig4 sweep -> " << out_dir << "/fig4.csv\n";
        return kExitOk;
    }

    std::cerr << "usage: unknown repro target '" << which << "' (table2|table1|fig3|fig4)\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"D2-LQG controller synthesis and benchmark toolkit"};
    app.require_subcommand(1);

    std::string config_path, method = "d2lqg", out, noise_override, which;
    std::vector<std::string> controller_paths;
    int trials = -1;
    std::uint64_t seed = 0;
    bool force = false, write_traj = false;

    auto* synth = app.add_subcommand("synth", "Synthesize a controller");
    synth->add_option("--config", config_path, "Scenario config (JSON file or builtin:pendulum, builtin:lft3)")->required();
    synth->add_option("--method", method, "lqg|dlqg|d2lqg");
    synth->add_option("--out", out, "Controller output file")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo / rollout simulation");
    simulate->add_option("--config", config_path, "Scenario config (JSON)")->required();
    simulate->add_option("--controller", controller_paths, "Controller file(s)")->required();
    simulate->add_option("--out", out, "Output prefix")->required();
    simulate->add_option("--trials", trials, "Trial count override");
    auto* seed_opt = simulate->add_option("--seed", seed, "Seed override");
    simulate->add_option("--noise", noise_override,
                         "zero|nominal_gaussian|component_uniform|worst_case|lft");
    simulate->add_flag("--force", force, "Skip controller/config hash check");
    simulate->add_flag("--traj", write_traj, "Write a trajectory CSV for trial 0");

    auto* worstcase = app.add_subcommand("worstcase", "Per-stage worst-case adversary report");
    worstcase->add_option("--config", config_path, "Scenario config (JSON)")->required();
    worstcase->add_option("--controller", controller_paths, "Controller file")->required();
    worstcase->add_option("--out", out, "Report CSV path")->required();
    worstcase->add_flag("--force", force, "Skip controller/config hash check");

    auto* repro = app.add_subcommand("repro", "Reproduce benchmark tables/figures");
    repro->add_option("which", which, "table2|table1|fig3|fig4")->required();
    repro->add_option("--out", out, "Output directory")->default_val("repro_out");
    repro->add_option("--trials", trials, "Trial count override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return (rc == 0) ? kExitOk : kExitUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(config_path, method, out);
        if (simulate->parsed()) {
            return cmd_simulate(config_path, controller_paths, out, trials, seed,
                                seed_opt->count() > 0, noise_override, force, write_traj);
        }
        if (worstcase->parsed()) {
            return cmd_worstcase(config_path, controller_paths.front(), out, force);
        }
        if (repro->parsed()) return cmd_repro(which, out, trials);
    } catch (const d2lqg::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const d2lqg::MissingLambdas& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const d2lqg::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const d2lqg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
