#include "d2lqg/worst_case.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

namespace d2lqg::worst_case {

namespace {

double logdet_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt, int n) {
    double ld = 0.0;
    const auto& L = llt.matrixLLT();
    for (int i = 0; i < n; ++i) ld += 2.0 * std::log(L(i, i));
    return ld;
}

void require_same_dim(const GaussianDensity& g1, const GaussianDensity& g0) {
    if (g1.dim() != g0.dim() || g1.cov.rows() != g0.cov.rows()) {
        throw DimensionMismatch("Gaussian densities have mismatched dimensions");
    }
}

}  // namespace

GaussianDensity worst_case_distribution(const Eigen::MatrixXd& P_next, double lambda,
                                        const Eigen::MatrixXd& V, const Eigen::VectorXd& drift) {
    const int n = static_cast<int>(V.rows());
    Eigen::LLT<Eigen::MatrixXd> v_llt(V);
    if (v_llt.info() != Eigen::Success) throw NotPositiveDefinite("V");

    Eigen::MatrixXd M = v_llt.solve(Eigen::MatrixXd::Identity(n, n)) - P_next / lambda;
    M = 0.5 * (M + M.transpose());
    Eigen::LLT<Eigen::MatrixXd> m_llt(M);
    if (m_llt.info() != Eigen::Success) throw InfeasibleMultiplier(-1);

    GaussianDensity out;
    out.cov = m_llt.solve(Eigen::MatrixXd::Identity(n, n));
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    out.mean = m_llt.solve((P_next / lambda) * drift);
    return out;
}

double gaussian_kl(const GaussianDensity& g1, const GaussianDensity& g0) {
    require_same_dim(g1, g0);
    const int n = g1.dim();

    Eigen::LLT<Eigen::MatrixXd> llt0(g0.cov);
    Eigen::LLT<Eigen::MatrixXd> llt1(g1.cov);
    if (llt0.info() != Eigen::Success || llt1.info() != Eigen::Success) {
        throw NotPositiveDefinite("covariance");
    }

    const double trace_term = llt0.solve(g1.cov).trace();
    const Eigen::VectorXd dm = g0.mean - g1.mean;
    const double quad_term = dm.dot(llt0.solve(dm));
    const double logdet0 = logdet_from_llt(llt0, n);
    const double logdet1 = logdet_from_llt(llt1, n);
    return 0.5 * (trace_term + quad_term - n + logdet0 - logdet1);
}

GaussianDensity tilted_gaussian(const Eigen::MatrixXd& Sigma, const Eigen::MatrixXd& G,
                                const Eigen::VectorXd& b) {
    const int n = static_cast<int>(Sigma.rows());
    if (G.rows() != n || G.cols() != n || b.size() != n) {
        throw DimensionMismatch("tilted_gaussian: inconsistent dimensions");
    }
    Eigen::LLT<Eigen::MatrixXd> s_llt(Sigma);
    if (s_llt.info() != Eigen::Success) throw NotPositiveDefinite("Sigma");

    Eigen::MatrixXd M = s_llt.solve(Eigen::MatrixXd::Identity(n, n)) - G;
    M = 0.5 * (M + M.transpose());
    Eigen::LLT<Eigen::MatrixXd> m_llt(M);
    if (m_llt.info() != Eigen::Success) throw DivergentTilt();

    GaussianDensity out;
    out.cov = m_llt.solve(Eigen::MatrixXd::Identity(n, n));
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    out.mean = m_llt.solve(b);
    return out;
}

double log_partition(const Eigen::MatrixXd& Sigma_form, const Eigen::VectorXd& b, double c) {
    const int n = static_cast<int>(Sigma_form.rows());
    if (b.size() != n) throw DimensionMismatch("log_partition: b has wrong length");
    Eigen::MatrixXd S = 0.5 * (Sigma_form + Sigma_form.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) throw DivergentIntegral();
    const double logdet = logdet_from_llt(llt, n);
    return 0.5 * (n * std::log(2.0 * std::numbers::pi) - logdet) + 0.5 * b.dot(llt.solve(b)) + c;
}

double log_mgf(const QuadraticForm& J, const GaussianDensity& f) {
    const int n = f.dim();
    Eigen::LLT<Eigen::MatrixXd> s_llt(f.cov);
    if (s_llt.info() != Eigen::Success) throw NotPositiveDefinite("cov");

    // Center the Gaussian: with y = x - mu,
    //   J(x) = 0.5 y'G y + (G mu + b)' y + J(mu).
    const Eigen::VectorXd b_c = J.G * f.mean + J.b;
    const double c_c = J(f.mean);

    Eigen::MatrixXd M = s_llt.solve(Eigen::MatrixXd::Identity(n, n)) - J.G;
    M = 0.5 * (M + M.transpose());
    Eigen::LLT<Eigen::MatrixXd> m_llt(M);
    if (m_llt.info() != Eigen::Success) throw DivergentTilt();

    // ln E[e^J] = -0.5 ln det(I - Sigma G) + 0.5 b_c'(Sigma^{-1}-G)^{-1} b_c + c_c,
    // with ln det(I - Sigma G) = ln det(Sigma^{-1} - G) + ln det Sigma.
    const double logdet_m = logdet_from_llt(m_llt, n);
    const double logdet_sigma = logdet_from_llt(s_llt, n);
    return -0.5 * (logdet_m + logdet_sigma) + 0.5 * b_c.dot(m_llt.solve(b_c)) + c_c;
}

double free_energy_gap(const QuadraticForm& J, const GaussianDensity& f,
                       const GaussianDensity& candidate) {
    require_same_dim(candidate, f);
    const double lhs = log_mgf(J, f);
    const double e_j = 0.5 * ((J.G * candidate.cov).trace() + candidate.mean.dot(J.G * candidate.mean)) +
                       J.b.dot(candidate.mean) + J.c;
    return lhs - (e_j - gaussian_kl(candidate, f));
}

}  // namespace d2lqg::worst_case
