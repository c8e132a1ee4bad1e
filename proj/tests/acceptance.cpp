// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest as `acceptance` or directly.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "d2lqg/baselines.hpp"
#include "d2lqg/dual_opt.hpp"
#include "d2lqg/riccati.hpp"
#include "d2lqg/scenario.hpp"
#include "d2lqg/sim.hpp"
#include "d2lqg/worst_case.hpp"
#include "quadrature.hpp"

using namespace d2lqg;

namespace {

struct CheckFailure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw CheckFailure{detail};
}

// Deterministic uniform in [0,1) independent of libstdc++ distributions.
struct Rand {
    std::uint64_t state;
    explicit Rand(std::uint64_t seed) : state(seed) {}
    double u01() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * u01(); }
};

model::ValidatedProblem scalar_problem(double A, double B, double Q, double QT, double R, double V,
                                       double E1, double d, int N, double x0 = 1.0) {
    model::RawProblem raw;
    raw.A = Eigen::MatrixXd::Constant(1, 1, A);
    raw.B = Eigen::MatrixXd::Constant(1, 1, B);
    raw.Q = Eigen::MatrixXd::Constant(1, 1, Q);
    raw.Q_terminal = Eigen::MatrixXd::Constant(1, 1, QT);
    raw.R = Eigen::MatrixXd::Constant(1, 1, R);
    raw.V = Eigen::MatrixXd::Constant(1, 1, V);
    raw.E1 = Eigen::MatrixXd::Constant(1, 1, E1);
    raw.d.default_value = d;
    raw.horizon = N;
    raw.x0 = Eigen::VectorXd::Constant(1, x0);
    return model::validate(raw);
}

double deterministic_cost(const Controller& ctrl, const model::ValidatedProblem& p) {
    const rng::SubStream stream(0, 0);
    return sim::rollout(ctrl, p, sim::DynamicsSpec::nominal(p), sim::ZeroNoise{}, stream).cost;
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// ---------------------------------------------------------------- criterion 1
void criterion_table2(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = scenario::pendulum_scenario();
    const auto p = cfg.validated();

    const auto lqg = baselines::synth_lqg(p);
    const auto dlqg = baselines::synth_dlqg(p, cfg.solver);
    const auto d2 = dual_opt::synth_d2lqg(p, cfg.solver);

    const double c_lqg = deterministic_cost(lqg, p);
    const double c_dlqg = deterministic_cost(dlqg, p);
    const double c_d2 = deterministic_cost(d2, p);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    std::ostringstream os;
    os << "lqg=" << c_lqg << " dlqg=" << c_dlqg << " d2lqg=" << c_d2 << " (" << secs << " s)";
    detail = os.str();

    require(within(c_lqg, 40.64, 0.005), "lqg cost " + std::to_string(c_lqg) + " not 40.64 +/-0.5%");
    require(within(c_dlqg, 729.41, 0.02),
            "dlqg cost " + std::to_string(c_dlqg) + " not 729.41 +/-2%");
    require(within(c_d2, 384.04, 0.02), "d2lqg cost " + std::to_string(c_d2) + " not 384.04 +/-2%");
    require(secs < 120.0, "synthesis + rollout exceeded 2 minutes");
}

// ---------------------------------------------------------------- criterion 2
void criterion_table1(std::string& detail) {
    auto cfg = scenario::pendulum_scenario();
    const auto p = cfg.validated();

    const auto lqg = baselines::synth_lqg(p);
    const auto dlqg = baselines::synth_dlqg(p, cfg.solver);
    const auto d2 = dual_opt::synth_d2lqg(p, cfg.solver);

    sim::DynamicsSpec dyn = sim::DynamicsSpec::nominal(p);
    dyn.A_true = p.A + *cfg.simulation.delta_A;
    const sim::NoiseModel noise = sim::ComponentUniform{
        cfg.simulation.uniform_bounds, cfg.simulation.window_lo, cfg.simulation.window_hi};

    const auto mc = sim::monte_carlo({&lqg, &dlqg, &d2}, p, dyn, noise, 1000, cfg.simulation.seed);
    const double m_lqg = mc.per_controller[0].mean;
    const double m_dlqg = mc.per_controller[1].mean;
    const double m_d2 = mc.per_controller[2].mean;
    const auto pr = sim::paired_ratios(mc.per_controller[1], mc.per_controller[2]);

    std::ostringstream os;
    os << "means lqg=" << m_lqg << " dlqg=" << m_dlqg << " d2lqg=" << m_d2 << " r_min=" << pr.r_min
       << " r_max=" << pr.r_max;
    detail = os.str();

    require(m_d2 >= 0.85e3 && m_d2 <= 1.20e3, "d2lqg mean outside [0.85,1.20]e3");
    require(m_dlqg >= 1.2e3 && m_dlqg <= 1.65e3, "dlqg mean outside [1.2,1.65]e3");
    require(m_lqg > 1e5, "lqg mean not > 1e5");
    require(pr.r_min > 1.0, "r_min not > 1");
    require(pr.r_max > pr.r_min, "r_max not > r_min");
}

// ---------------------------------------------------------------- criterion 3
void criterion_fig3(std::string& detail) {
    auto cfg = scenario::lft3_scenario();
    const auto p = cfg.validated();
    const auto lqg = baselines::synth_lqg(p);
    const auto dlqg = baselines::synth_dlqg(p, cfg.solver);
    const auto d2 = dual_opt::synth_d2lqg(p, cfg.solver);

    std::vector<double> cs;
    const double cmax = 1.0 / std::sqrt(3.0);
    for (int i = 0; i < 21; ++i) cs.push_back(-cmax + 2.0 * cmax * i / 20.0);
    const auto sweep = sim::lft_sweep({&lqg, &dlqg, &d2}, p, cs, cfg.simulation.trials,
                                      cfg.simulation.seed);

    const auto d2_row = sweep.mean_costs.row(2);
    const auto lqg_row = sweep.mean_costs.row(0);
    const auto dlqg_row = sweep.mean_costs.row(1);
    const double d2_spread = d2_row.maxCoeff() / d2_row.minCoeff();
    const double lqg_left = lqg_row(0) / d2_row(0);
    const double lqg_right = lqg_row(20) / d2_row(20);

    std::ostringstream os;
    os << "d2 spread=" << d2_spread << " lqg/d2 at -cmax=" << lqg_left << " at +cmax=" << lqg_right;
    detail = os.str();

    require(d2_spread <= 3.0, "d2lqg max/min over c exceeds 3");
    require(lqg_left >= 10.0 && lqg_right >= 10.0, "lqg at |c|=cmax not >= 10x d2lqg");
    for (int i = 0; i < 21; ++i) {
        require(dlqg_row(i) >= d2_row(i) * (1.0 - 1e-9),
                "dlqg below d2lqg at c index " + std::to_string(i));
    }
}

// ---------------------------------------------------------------- criterion 4
void criterion_lqg_limit(std::string& detail) {
    auto cfg = scenario::pendulum_scenario();
    cfg.problem.E1 = Eigen::MatrixXd::Zero(1, 4);
    cfg.problem.d.default_value = 1e-12;
    cfg.problem.d.overrides.clear();
    const auto p = model::validate(cfg.problem);

    const auto lqg = baselines::synth_lqg(p);
    const auto d2 = dual_opt::synth_d2lqg(p, cfg.solver);
    double worst = 0.0;
    for (int t = 0; t <= p.N; ++t) {
        const double rel = (d2.gains[static_cast<std::size_t>(t)] -
                            lqg.gains[static_cast<std::size_t>(t)]).norm() /
                           lqg.gains[static_cast<std::size_t>(t)].norm();
        worst = std::max(worst, rel);
    }
    detail = "max relative gain deviation = " + std::to_string(worst);
    require(worst <= 1e-4, "gain deviation exceeds 1e-4");
}

// ---------------------------------------------------------------- criterion 5
void criterion_stage_duality(std::string& detail) {
    Rand rnd(2024);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double A = rnd.range(0.5, 1.5);
        const double Q = rnd.range(0.2, 2.0);
        const double S_next = rnd.range(0.5, 3.0);
        const double V = rnd.range(0.2, 1.5);
        const double e1 = rnd.range(0.0, 0.8);
        const double d = rnd.range(0.05, 0.5);
        const double x = rnd.range(-2.0, 2.0);

        // Dual: phi = min_{w > S_next V} 0.5 x (S_t - Q) x + r_t.
        const double floor = S_next * V;
        auto dual_value = [&](double w) {
            const double inner = 1.0 / S_next - V / w;
            if (inner <= 0.0) return std::numeric_limits<double>::infinity();
            const double s_t_minus_q = w * e1 * e1 + A * A / inner;
            const double r_t = -0.5 * w * std::log(1.0 - S_next * V / w) + w * d;
            return 0.5 * x * s_t_minus_q * x + r_t;
        };
        double best = std::numeric_limits<double>::infinity();
        // golden on a log bracket above the floor
        double a = floor * (1.0 + 1e-9), b = floor * 1e6;
        const double gr = 0.6180339887498949;
        double c = b - gr * (b - a), dd = a + gr * (b - a);
        double fc = dual_value(c), fd = dual_value(dd);
        for (int it = 0; it < 400 && (b - a) > 1e-12 * (a + b); ++it) {
            if (fc < fd) {
                b = dd; dd = c; fd = fc;
                c = b - gr * (b - a); fc = dual_value(c);
            } else {
                a = c; c = dd; fc = fd;
                dd = a + gr * (b - a); fd = dual_value(dd);
            }
            best = std::min(fc, fd);
        }
        const double phi = best;

        // Primal lower bound over Gaussian candidates N(m, s) in the KL ball:
        // for each s the best mean saturates the ball.
        const double radius = d + 0.5 * e1 * e1 * x * x;
        const double mean_drift = A * x;
        double primal = -std::numeric_limits<double>::infinity();
        const int grid = 200000;
        for (int i = 0; i <= grid; ++i) {
            // s/V ratio on a wide log grid
            const double r = std::exp(std::log(1e-3) + (std::log(64.0) - std::log(1e-3)) * i / grid);
            const double g = 0.5 * (r - 1.0 - std::log(r));
            if (g > radius) continue;
            const double m = std::sqrt(2.0 * V * (radius - g));
            const double mean_term = (std::abs(mean_drift) + m);
            const double value = 0.5 * S_next * (mean_term * mean_term + r * V);
            primal = std::max(primal, value);
        }
        const double rel_gap = std::abs(phi - primal) / std::abs(phi);
        worst = std::max(worst, rel_gap);
    }
    { std::ostringstream os; os << "max |phi - primal|/phi over 20 instances = " << worst; detail = os.str(); }
    require(worst <= 0.01, "duality gap above 1%");
}

// ---------------------------------------------------------------- criterion 6
void criterion_midpoint_convexity(std::string& detail) {
    // 3-state observable instance.
    model::RawProblem raw;
    raw.A = Eigen::MatrixXd(3, 3);
    raw.A << 0.9, 0.2, 0.0, -0.1, 1.05, 0.1, 0.05, 0.0, 0.8;
    raw.B = Eigen::MatrixXd(3, 1);
    raw.B << 0.3, 0.5, -0.2;
    raw.Q = Eigen::MatrixXd::Identity(3, 3);
    raw.Q_terminal = Eigen::MatrixXd::Identity(3, 3) * 1.5;
    raw.R = Eigen::MatrixXd::Constant(1, 1, 0.8);
    raw.V = Eigen::MatrixXd::Identity(3, 3) * 0.4;
    raw.E1 = Eigen::MatrixXd(1, 3);
    raw.E1 << 0.2, 0.1, -0.1;
    raw.d.default_value = 0.15;
    raw.horizon = 6;
    raw.x0 = Eigen::VectorXd::Ones(3);
    const auto p = model::validate(raw);

    const auto base = dual_opt::initial_schedule(p, riccati::Variant::D2LQG);
    Rand rnd(7);
    int checked = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    while (checked < 100) {
        MultiplierSchedule a = base, b = base, mid = base;
        for (std::size_t t = 0; t < base.lambdas.size(); ++t) {
            a.lambdas[t] = base.lambdas[t] * (1.0 + 3.0 * rnd.u01());
            b.lambdas[t] = base.lambdas[t] * (1.0 + 3.0 * rnd.u01());
            mid.lambdas[t] = 0.5 * (a.lambdas[t] + b.lambdas[t]);
        }
        const double wa = dual_opt::eval_W0(a, p, riccati::Variant::D2LQG, p.x0);
        const double wb = dual_opt::eval_W0(b, p, riccati::Variant::D2LQG, p.x0);
        const double wm = dual_opt::eval_W0(mid, p, riccati::Variant::D2LQG, p.x0);
        if (!std::isfinite(wa) || !std::isfinite(wb) || !std::isfinite(wm)) continue;
        const double slack = 0.5 * wa + 0.5 * wb - wm;
        worst_slack = std::min(worst_slack, slack);
        ++checked;
    }
    detail = "min slack over 100 triples = " + std::to_string(worst_slack);
    require(worst_slack >= -1e-9, "midpoint inequality violated beyond 1e-9");
}

// ---------------------------------------------------------------- criterion 7
void criterion_stationarity(std::string& detail) {
    const auto cfg = scenario::pendulum_scenario();
    const auto p = cfg.validated();
    const auto report = dual_opt::coordinate_descent(p, riccati::Variant::D2LQG, p.x0, cfg.solver);
    std::ostringstream os;
    os << "converged=" << report.converged << " sweeps=" << report.iterations
       << " scaled grad norm=" << report.gradient_norm;
    detail = os.str();
    require(report.gradient_norm <= 1e-4, "scaled gradient norm above 1e-4");
}

// ---------------------------------------------------------------- criterion 8
void criterion_appendix_oracles(std::string& detail) {
    Rand rnd(99);
    double worst = 0.0;
    int divergies = 0;
    for (int k = 0; k < 50; ++k) {
        const double Sigma = rnd.range(0.3, 2.0);
        const double G = rnd.range(-0.5, 1.2 / Sigma);  // sometimes divergent
        const double b = rnd.range(-0.8, 0.8);

        const bool convergent = (1.0 / Sigma - G) > 0.0;
        // Integrand growth at large |x|, in logs to dodge overflow: the tilt
        // e^{J} f decays at infinity exactly when the quadratic form converges.
        auto log_tilt = [&](double x) {
            return 0.5 * G * x * x + b * x - 0.5 * x * x / Sigma;
        };
        const double far = std::max(log_tilt(60.0), log_tilt(-60.0));
        const double mid = std::max(log_tilt(30.0), log_tilt(-30.0));
        const bool grows = far > mid;
        require(grows == !convergent, "integrand growth disagrees with PD test");
        auto tilt_integrand = [&](double x) {
            return std::exp(0.5 * G * x * x + b * x) * oracle::normal_pdf(x, 0.0, Sigma);
        };

        if (!convergent) {
            ++divergies;
            bool threw = false;
            try {
                (void)worst_case::tilted_gaussian(Eigen::MatrixXd::Constant(1, 1, Sigma),
                                                  Eigen::MatrixXd::Constant(1, 1, G),
                                                  Eigen::VectorXd::Constant(1, b));
            } catch (const DivergentTilt&) {
                threw = true;
            }
            require(threw, "DivergentTilt not raised for a divergent tilt");
            continue;
        }

        // tilted_gaussian against normalized quadrature.
        const auto g = worst_case::tilted_gaussian(Eigen::MatrixXd::Constant(1, 1, Sigma),
                                                   Eigen::MatrixXd::Constant(1, 1, G),
                                                   Eigen::VectorXd::Constant(1, b));
        const double span = 10.0 * std::sqrt(std::max(Sigma, g.cov(0, 0)));
        const double Z =
            oracle::integrate(tilt_integrand, g.mean(0) - span, g.mean(0) + span, 1e-13);
        for (double x : {g.mean(0), g.mean(0) + 0.7, g.mean(0) - 1.3}) {
            const double ref = tilt_integrand(x) / Z;
            const double val = oracle::normal_pdf(x, g.mean(0), g.cov(0, 0));
            worst = std::max(worst, std::abs(ref - val));
        }

        // log_partition against quadrature (positive-definite form).
        const double S_form = rnd.range(0.2, 2.5);
        const double bb = rnd.range(-1.0, 1.0);
        const double cc = rnd.range(-0.5, 0.5);
        const double lp = worst_case::log_partition(Eigen::MatrixXd::Constant(1, 1, S_form),
                                                    Eigen::VectorXd::Constant(1, bb), cc);
        auto lp_integrand = [&](double x) { return std::exp(-0.5 * S_form * x * x + bb * x + cc); };
        const double lp_quad = std::log(oracle::integrate(lp_integrand, -60.0, 60.0, 1e-13));
        worst = std::max(worst, std::abs(lp - lp_quad));

        // gaussian_kl against quadrature.
        const double m1 = rnd.range(-1.0, 1.0), v1 = rnd.range(0.3, 2.0);
        const double m0 = rnd.range(-1.0, 1.0), v0 = rnd.range(0.3, 2.0);
        worst_case::GaussianDensity g1{Eigen::VectorXd::Constant(1, m1),
                                       Eigen::MatrixXd::Constant(1, 1, v1)};
        worst_case::GaussianDensity g0{Eigen::VectorXd::Constant(1, m0),
                                       Eigen::MatrixXd::Constant(1, 1, v0)};
        const double kl = worst_case::gaussian_kl(g1, g0);
        auto kl_integrand = [&](double x) {
            const double p1 = oracle::normal_pdf(x, m1, v1);
            const double p0 = oracle::normal_pdf(x, m0, v0);
            return p1 * std::log(p1 / p0);
        };
        const double kl_quad =
            oracle::integrate_gaussian_support(kl_integrand, m1, std::sqrt(v1), 1e-13);
        worst = std::max(worst, std::abs(kl - kl_quad));
    }
    std::ostringstream os;
    os << "max abs error vs quadrature = " << worst << " (divergent tilts seen: " << divergies
       << ")";
    detail = os.str();
    require(worst <= 1e-8, "oracle mismatch above 1e-8");
    require(divergies > 0, "no divergent tilt sampled; check generator ranges");
}

// ---------------------------------------------------------------- criterion 9
void criterion_riccati_positivity(std::string& detail) {
    Rand rnd(31);
    int done = 0;
    double min_eig_seen = std::numeric_limits<double>::infinity();
    while (done < 100) {
        const int n = 1 + static_cast<int>(rnd.u01() * 4.0);
        model::RawProblem raw;
        raw.A = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) raw.A(i, j) = rnd.range(-0.8, 0.8);
        }
        raw.B = Eigen::MatrixXd::Zero(n, 1);
        for (int i = 0; i < n; ++i) raw.B(i, 0) = rnd.range(-1.0, 1.0);
        Eigen::MatrixXd Mq = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) Mq(i, j) = rnd.range(-1.0, 1.0);
        }
        raw.Q = Mq.transpose() * Mq + 1e-3 * Eigen::MatrixXd::Identity(n, n);
        raw.Q_terminal = raw.Q + Eigen::MatrixXd::Identity(n, n);
        raw.R = Eigen::MatrixXd::Constant(1, 1, rnd.range(0.2, 2.0));
        Eigen::MatrixXd Mv = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) Mv(i, j) = rnd.range(-0.5, 0.5);
        }
        raw.V = Mv.transpose() * Mv + 0.1 * Eigen::MatrixXd::Identity(n, n);
        raw.E1 = Eigen::MatrixXd::Zero(1, n);
        for (int j = 0; j < n; ++j) raw.E1(0, j) = rnd.range(-0.4, 0.4);
        raw.d.default_value = rnd.range(0.01, 0.3);
        raw.horizon = 5 + static_cast<int>(rnd.u01() * 10);
        raw.x0 = Eigen::VectorXd::Zero(n);

        model::ValidatedProblem p = [&] {
            try {
                return model::validate(raw);
            } catch (const ValidationError&) {
                raw.Q += 0.1 * Eigen::MatrixXd::Identity(n, n);
                return model::validate(raw);
            }
        }();

        MultiplierSchedule sched;
        try {
            sched = dual_opt::initial_schedule(p, riccati::Variant::D2LQG);
        } catch (const InitializationFailed&) {
            continue;
        }
        const auto sol = riccati::backward_pass(sched, p, riccati::Variant::D2LQG);
        if (!sol.feasible) continue;
        for (const auto& P : sol.P) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
            min_eig_seen = std::min(min_eig_seen, es.eigenvalues().minCoeff());
        }
        ++done;
    }
    detail = "min eigenvalue over all P_t of 100 feasible passes = " + std::to_string(min_eig_seen);
    require(min_eig_seen > 0.0, "nonpositive Riccati iterate eigenvalue");
}

// --------------------------------------------------------------- criterion 10
void criterion_restriction(std::string& detail) {
    double worst_margin = std::numeric_limits<double>::infinity();

    // Pendulum.
    {
        const auto cfg = scenario::pendulum_scenario();
        const auto p = cfg.validated();
        const auto dlqg = baselines::synth_dlqg(p, cfg.solver);
        const auto d2 = dual_opt::synth_d2lqg(p, cfg.solver);
        worst_margin = std::min(worst_margin, *dlqg.value - *d2.value);
        require(*dlqg.value >= *d2.value - 1e-9 * std::max(1.0, std::abs(*d2.value)),
                "pendulum: constant-schedule value below free-schedule value");
    }
    // Scalar family.
    Rand rnd(12);
    for (int k = 0; k < 10; ++k) {
        const auto p = scalar_problem(rnd.range(0.7, 1.25), rnd.range(0.3, 1.0), 1.0,
                                      rnd.range(0.8, 1.5), 1.0, rnd.range(0.3, 1.0),
                                      rnd.range(0.0, 0.5), rnd.range(0.05, 0.4),
                                      3 + static_cast<int>(rnd.u01() * 6));
        const auto dlqg = baselines::synth_dlqg(p);
        const auto d2 = dual_opt::synth_d2lqg(p);
        worst_margin = std::min(worst_margin, *dlqg.value - *d2.value);
        require(*dlqg.value >= *d2.value - 1e-9 * std::max(1.0, std::abs(*d2.value)),
                "scalar instance " + std::to_string(k) + ": restriction inequality violated");
    }
    detail = "min (value_dlqg - value_d2lqg) over tested problems = " +
             std::to_string(worst_margin);
}

struct Criterion {
    int id;
    std::string name;
    std::function<void(std::string&)> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "table2 nominal rollout costs", criterion_table2},
        {2, "table1 perturbed monte carlo", criterion_table1},
        {3, "fig3 lft robustness sweep", criterion_fig3},
        {4, "vanishing-radius limit equals lqg", criterion_lqg_limit},
        {5, "stage duality vs gaussian grid", criterion_stage_duality},
        {6, "midpoint convexity", criterion_midpoint_convexity},
        {7, "stationarity at the optimum", criterion_stationarity},
        {8, "appendix oracles vs quadrature", criterion_appendix_oracles},
        {9, "riccati positivity", criterion_riccati_positivity},
        {10, "restriction inequality", criterion_restriction},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = true;
        std::string why;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.fn(detail);
        } catch (const CheckFailure& f) {
            ok = false;
            why = f.detail;
        } catch (const std::exception& e) {
            ok = false;
            why = std::string("exception: ") + e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.name;
        if (!detail.empty()) std::cout << " | " << detail;
        if (!ok) std::cout << " | " << why;
        std::cout << " | " << secs << " s" << std::endl;
        if (!ok) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failing" << std::endl;
        return 1;
    }
    std::cout << "all criteria passing" << std::endl;
    return 0;
}
