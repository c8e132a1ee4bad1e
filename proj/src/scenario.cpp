#include "d2lqg/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace d2lqg::scenario {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw ValidationError("config: " + name + " must be a nested array (row-major)");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols) {
            throw ValidationError("config: " + name + " has ragged rows");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            M(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
        }
    }
    return M;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& name) {
    if (!j.is_array()) throw ValidationError("config: " + name + " must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

NoiseKind noise_from_string(const std::string& s) {
    if (s == "zero") return NoiseKind::Zero;
    if (s == "nominal_gaussian") return NoiseKind::NominalGaussian;
    if (s == "component_uniform") return NoiseKind::ComponentUniform;
    if (s == "worst_case") return NoiseKind::WorstCase;
    if (s == "lft") return NoiseKind::Lft;
    throw ValidationError("config: unknown noise kind '" + s + "'");
}

}  // namespace

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: JSON parse error: ") + e.what());
    }

    ScenarioConfig cfg;
    cfg.raw_text = json_text;
    cfg.hash = fnv1a64_hex(json_text);

    if (!j.contains("problem")) throw ValidationError("config: missing 'problem' block");
    const json& p = j["problem"];
    cfg.problem.A = matrix_from_json(p.at("A"), "A");
    cfg.problem.B = matrix_from_json(p.at("B"), "B");
    cfg.problem.V = matrix_from_json(p.at("V"), "V");
    cfg.problem.Q = matrix_from_json(p.at("Q"), "Q");
    cfg.problem.Q_terminal = matrix_from_json(p.at("Q_terminal"), "Q_terminal");
    cfg.problem.R = matrix_from_json(p.at("R"), "R");
    cfg.problem.E1 = matrix_from_json(p.at("E1"), "E1");
    if (p.contains("E2")) cfg.problem.E2 = matrix_from_json(p["E2"], "E2");
    cfg.problem.x0 = vector_from_json(p.at("x0"), "x0");

    cfg.problem.horizon = j.at("horizon").get<int>();

    if (!j.contains("d")) throw ValidationError("config: missing 'd' block");
    const json& dblk = j["d"];
    cfg.problem.d.default_value = dblk.at("default").get<double>();
    if (dblk.contains("overrides")) {
        for (const auto& o : dblk["overrides"]) {
            cfg.problem.d.overrides.push_back(model::DSchedule::Override{
                o.at("from").get<int>(), o.at("to").get<int>(), o.at("value").get<double>()});
        }
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        if (s.contains("tol_rel")) cfg.solver.tol_rel = s["tol_rel"].get<double>();
        if (s.contains("max_sweeps")) cfg.solver.max_sweeps = s["max_sweeps"].get<int>();
        if (s.contains("kappa_init")) cfg.solver.kappa_init = s["kappa_init"].get<double>();
        if (s.contains("inner_tol")) cfg.solver.inner_tol = s["inner_tol"].get<double>();
    }

    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        if (s.contains("trials")) cfg.simulation.trials = s["trials"].get<int>();
        if (s.contains("seed")) cfg.simulation.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("noise")) cfg.simulation.noise = noise_from_string(s["noise"].get<std::string>());
        if (s.contains("uniform_bounds")) {
            cfg.simulation.uniform_bounds = vector_from_json(s["uniform_bounds"], "uniform_bounds");
        }
        if (s.contains("window")) {
            cfg.simulation.window_lo = s["window"].at(0).get<int>();
            cfg.simulation.window_hi = s["window"].at(1).get<int>();
        }
        if (s.contains("delta_A")) cfg.simulation.delta_A = matrix_from_json(s["delta_A"], "delta_A");
        if (s.contains("lft_c")) cfg.simulation.lft_c = s["lft_c"].get<double>();
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    if (path == "builtin:pendulum") return pendulum_scenario();
    if (path == "builtin:lft3") return lft3_scenario();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io: cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void save_controller(const std::string& path, const Controller& controller,
                     const std::string& config_hash) {
    json j;
    j["format"] = "d2lqg-controller-v1";
    j["tool_version"] = kToolVersion;
    j["config_hash"] = config_hash;
    j["method"] = method_name(controller.method);
    j["horizon"] = controller.horizon();
    json gains = json::array();
    for (const auto& K : controller.gains) gains.push_back(matrix_to_json(K));
    j["gains"] = std::move(gains);
    if (controller.lambdas) j["lambdas"] = controller.lambdas->lambdas;
    if (controller.value) j["value"] = *controller.value;
    if (controller.P0) j["P0"] = matrix_to_json(*controller.P0);
    if (controller.P) {
        json ps = json::array();
        for (const auto& P : *controller.P) ps.push_back(matrix_to_json(P));
        j["P"] = std::move(ps);
    }
    j["suboptimal_bound"] = controller.suboptimal_bound;
    j["provenance"] = controller.provenance;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io: cannot write controller file '" + path + "'");
    out << j.dump(2) << "\n";
}

LoadedController load_controller(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io: cannot open controller file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("controller file: JSON parse error: ") + e.what());
    }
    if (j.value("format", "") != std::string("d2lqg-controller-v1")) {
        throw ValidationError("controller file: unknown format tag");
    }

    LoadedController out;
    out.config_hash = j.value("config_hash", "");
    out.tool_version = j.value("tool_version", "");
    const auto method = method_from_name(j.at("method").get<std::string>());
    if (!method) throw ValidationError("controller file: unknown method tag");
    out.controller.method = *method;
    for (const auto& g : j.at("gains")) {
        out.controller.gains.push_back(matrix_from_json(g, "gains[t]"));
    }
    if (j.contains("lambdas")) {
        MultiplierSchedule s;
        s.lambdas = j["lambdas"].get<std::vector<double>>();
        out.controller.lambdas = std::move(s);
    }
    if (j.contains("value")) out.controller.value = j["value"].get<double>();
    if (j.contains("P0")) out.controller.P0 = matrix_from_json(j["P0"], "P0");
    if (j.contains("P")) {
        std::vector<Eigen::MatrixXd> ps;
        for (const auto& pm : j["P"]) ps.push_back(matrix_from_json(pm, "P[t]"));
        out.controller.P = std::move(ps);
    }
    out.controller.suboptimal_bound = j.value("suboptimal_bound", false);
    out.controller.provenance = j.value("provenance", "");
    return out;
}

void write_costs_csv(const std::string& path, const std::vector<sim::SimulationResult>& results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io: cannot write '" + path + "'");
    out << "trial,controller,cost\n";
    out.precision(17);
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.costs.size(); ++i) {
            out << i << "," << r.name << "," << r.costs[i] << "\n";
        }
    }
}

void write_trajectory_csv(const std::string& path, const sim::Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io: cannot write '" + path + "'");
    const auto n = traj.X.rows();
    const auto m = traj.U.rows();
    out << "t";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
    for (Eigen::Index i = 1; i <= m; ++i) out << ",u_" << i;
    for (Eigen::Index i = 1; i <= n; ++i) out << ",v_" << i;
    out << ",stage_cost\n";
    out.precision(17);
    const auto N1 = traj.U.cols();  // N+1 stages with inputs
    for (Eigen::Index t = 0; t < N1; ++t) {
        out << t;
        for (Eigen::Index i = 0; i < n; ++i) out << "," << traj.X(i, t);
        for (Eigen::Index i = 0; i < m; ++i) out << "," << traj.U(i, t);
        for (Eigen::Index i = 0; i < n; ++i) out << "," << traj.Vn(i, t);
        out << "," << traj.stage_costs(t) << "\n";
    }
    // terminal row: state and terminal cost only
    out << N1;
    for (Eigen::Index i = 0; i < n; ++i) out << "," << traj.X(i, N1);
    for (Eigen::Index i = 0; i < m; ++i) out << ",";
    for (Eigen::Index i = 0; i < n; ++i) out << ",";
    out << "," << traj.stage_costs(N1) << "\n";
}

ScenarioConfig pendulum_scenario() { return parse_config(pendulum_config_text()); }
ScenarioConfig lft3_scenario() { return parse_config(lft3_config_text()); }

}  // namespace d2lqg::scenario
