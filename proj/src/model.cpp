#include "d2lqg/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <string>

namespace d2lqg::model {

namespace {

void require_dims(const Eigen::MatrixXd& M, int rows, int cols, const std::string& name) {
    if (M.rows() != rows || M.cols() != cols) {
        throw DimensionMismatch(name + " must be " + std::to_string(rows) + "x" + std::to_string(cols) +
                                ", got " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
    }
}

// Symmetrize, rejecting inputs whose asymmetry exceeds kSymmetryTol relative.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M, const std::string& name) {
    const double scale = std::max(1.0, M.norm());
    const double asym = (M - M.transpose()).norm() / scale;
    if (asym > kSymmetryTol) {
        throw NotSymmetric(name + " is asymmetric beyond tolerance (relative asymmetry " +
                           std::to_string(asym) + ")");
    }
    return 0.5 * (M + M.transpose());
}

enum class Definiteness { PositiveDefinite, PositiveSemiDefinite };

void check_definite(const Eigen::MatrixXd& M, Definiteness cls, const std::string& name) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const double tol = definiteness_tol(M);
    const bool ok = (cls == Definiteness::PositiveDefinite) ? (min_eig > tol) : (min_eig > -tol);
    if (!ok) throw NotPositiveDefinite(name);
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Rank of the observability matrix of (A, Q^{1/2}) via singular values,
// threshold 1e-9 relative to the largest singular value.
bool observable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
    const int n = static_cast<int>(A.rows());
    const Eigen::MatrixXd C = symmetric_sqrt(Q);
    Eigen::MatrixXd obs(n * n, n);
    Eigen::MatrixXd Ak = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < n; ++k) {
        obs.middleRows(k * n, n) = C * Ak;
        Ak = Ak * A;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs);
    const Eigen::VectorXd sv = svd.singularValues();
    const double thresh = 1e-9 * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > thresh) ++rank;
    }
    return rank == n;
}

}  // namespace

double definiteness_tol(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const double largest = es.eigenvalues().cwiseAbs().maxCoeff();
    return 1e-9 * std::max(1.0, largest);
}

AmbiguityRadius radius_at(const ValidatedProblem& problem, int t) {
    if (t < 0 || t > problem.N) {
        throw DimensionMismatch("stage index " + std::to_string(t) + " outside horizon");
    }
    return AmbiguityRadius{problem.d[static_cast<std::size_t>(t)], problem.E1, problem.E2};
}

ValidatedProblem validate(const RawProblem& raw) {
    const int n = static_cast<int>(raw.A.rows());
    const int m = static_cast<int>(raw.B.cols());
    const int p = static_cast<int>(raw.E1.rows());

    if (n == 0) throw DimensionMismatch("A must be nonempty");
    if (raw.horizon < 0) throw DimensionMismatch("horizon N must be >= 0");
    require_dims(raw.A, n, n, "A");
    require_dims(raw.B, n, m, "B");
    require_dims(raw.V, n, n, "V");
    require_dims(raw.Q, n, n, "Q");
    require_dims(raw.Q_terminal, n, n, "Q_terminal");
    require_dims(raw.R, m, m, "R");
    require_dims(raw.E1, p, n, "E1");
    if (raw.E2) require_dims(*raw.E2, p, m, "E2");
    if (raw.x0.size() != n) {
        throw DimensionMismatch("x0 must have length " + std::to_string(n));
    }

    ValidatedProblem out;
    out.A = raw.A;
    out.B = raw.B;
    out.V = symmetrized(raw.V, "V");
    out.Q = symmetrized(raw.Q, "Q");
    out.Q_terminal = symmetrized(raw.Q_terminal, "Q_terminal");
    out.R = symmetrized(raw.R, "R");
    out.E1 = raw.E1;
    out.E2 = raw.E2;
    out.d_schedule = raw.d;
    out.N = raw.horizon;
    out.x0 = raw.x0;
    out.n = n;
    out.m = m;
    out.p = p;

    check_definite(out.V, Definiteness::PositiveDefinite, "V");
    check_definite(out.Q_terminal, Definiteness::PositiveDefinite, "Q_terminal");
    check_definite(out.R, Definiteness::PositiveDefinite, "R");
    check_definite(out.Q, Definiteness::PositiveSemiDefinite, "Q");

    out.d = raw.d.expand(raw.horizon);
    for (int t = 0; t <= raw.horizon; ++t) {
        if (!(out.d[static_cast<std::size_t>(t)] > 0.0)) throw NonPositiveTolerance(t);
    }

    if (!observable(out.A, out.Q)) throw NotObservable();

    if (out.E2) {
        const Eigen::MatrixXd cross = out.E1.transpose() * (*out.E2);
        const double scale = std::max(1.0, out.E1.norm() * out.E2->norm());
        if (cross.norm() > 1e-10 * scale) throw CrossTermNotZero();
    }

    out.V_sqrt = symmetric_sqrt(out.V);
    return out;
}

}  // namespace d2lqg::model
