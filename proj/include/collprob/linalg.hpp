#pragma once

#include <Eigen/Dense>

namespace collprob {

/// True if M is symmetric within a relative tolerance.
inline bool is_symmetric(const Eigen::MatrixXd& M, double rel_tol = 1e-12) {
    if (M.rows() != M.cols()) return false;
    double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    return (M - M.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& M) {
    return 0.5 * (M + M.transpose());
}

/// Symmetric matrix square root. Eigenvalues are clamped at 1e-14 of the
/// largest so near-degenerate shapes stay usable.
inline Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M));
    Eigen::VectorXd w = es.eigenvalues();
    double floor = 1e-14 * std::max(0.0, w.maxCoeff());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) = std::sqrt(std::max(w(i), floor));
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

/// Inverse symmetric square root with the same clamping.
inline Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M));
    Eigen::VectorXd w = es.eigenvalues();
    double floor = 1e-14 * std::max(1e-300, w.maxCoeff());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) = 1.0 / std::sqrt(std::max(w(i), floor));
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

/// Square root and inverse square root from a single decomposition.
inline void sym_sqrt_pair(const Eigen::MatrixXd& M, Eigen::MatrixXd& root,
                          Eigen::MatrixXd& inv_root) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M));
    Eigen::VectorXd w = es.eigenvalues();
    const double floor = 1e-14 * std::max(1e-300, w.maxCoeff());
    Eigen::VectorXd r(w.size()), ir(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        r(i) = std::sqrt(std::max(w(i), floor));
        ir(i) = 1.0 / r(i);
    }
    root = es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
    inv_root = es.eigenvectors() * ir.asDiagonal() * es.eigenvectors().transpose();
}

/// Condition number estimate of a symmetric matrix.
inline double sym_cond(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(M));
    double lo = es.eigenvalues().cwiseAbs().minCoeff();
    double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

} // namespace collprob
