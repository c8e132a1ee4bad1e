#pragma once

#include <Eigen/Dense>

#include "d2lqg/errors.hpp"

namespace d2lqg::worst_case {

struct GaussianDensity {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;  // symmetric positive definite

    int dim() const { return static_cast<int>(mean.size()); }
};

// Quadratic exponent J(x) = 0.5 x'G x + b'x + c.
struct QuadraticForm {
    Eigen::MatrixXd G;  // positive semidefinite
    Eigen::VectorXd b;
    double c = 0.0;

    double operator()(const Eigen::VectorXd& x) const { return 0.5 * x.dot(G * x) + b.dot(x) + c; }
};

// Least-favorable stage distribution for multiplier lambda and drift Ax + Bu:
//   N( (V^{-1} - P_next/lambda)^{-1} (P_next/lambda) drift,
//      (V^{-1} - P_next/lambda)^{-1} ).
// Requires lambda above the stage floor; the covariance dominates V.
GaussianDensity worst_case_distribution(const Eigen::MatrixXd& P_next, double lambda,
                                        const Eigen::MatrixXd& V, const Eigen::VectorXd& drift);

// Exact KL divergence between Gaussians (general covariances).
double gaussian_kl(const GaussianDensity& g1, const GaussianDensity& g0);

// Normalization of e^{J} f for f = N(0, Sigma): N((Sigma^{-1}-G)^{-1} b,
// (Sigma^{-1}-G)^{-1}). Throws DivergentTilt when Sigma^{-1} - G is not PD.
GaussianDensity tilted_gaussian(const Eigen::MatrixXd& Sigma, const Eigen::MatrixXd& G,
                                const Eigen::VectorXd& b);

// ln of integral exp(-0.5 x'Sigma_form x + b'x + c) dx; throws DivergentIntegral
// unless Sigma_form is positive definite.
double log_partition(const Eigen::MatrixXd& Sigma_form, const Eigen::VectorXd& b, double c);

// ln E_f[e^J] for Gaussian f (any mean) and quadratic J; diverges with the tilt.
double log_mgf(const QuadraticForm& J, const GaussianDensity& f);

// Free-energy gap  ln E_f[e^J] - (E_candidate[J] - KL(candidate || f)).
// Nonnegative for every candidate; zero exactly at the tilted density.
double free_energy_gap(const QuadraticForm& J, const GaussianDensity& f,
                       const GaussianDensity& candidate);

}  // namespace d2lqg::worst_case
