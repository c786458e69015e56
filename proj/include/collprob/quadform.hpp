#pragma once

#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace collprob {

/// Standardized Gaussian quadratic form x^T A x, x ~ N(mu, Sigma):
/// sum_i lambda_i (u_i + b_i)^2 with u ~ N(0, I).
struct QuadFormSpec {
    Eigen::VectorXd lambdas;  ///< eigenvalues of Sigma^{1/2} A Sigma^{1/2}, descending
    Eigen::VectorXd b;        ///< P^T Sigma^{-1/2} mu
    int n = 0;
};

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
    double last_term_magnitude = 0.0;
};

QuadFormSpec standardize(const Eigen::MatrixXd& A,
                         const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& Sigma);

/// CDF of the quadratic form at v as the alternating power series
/// sum_k (-1)^k c_k v^{n/2+k} / Gamma(n/2+k+1).
///
/// Terminates once two consecutive terms fall below tol relative to the
/// partial sum, or at k_max with converged=false. The series can be
/// numerically unstable for large v or extreme eigenvalue ratios; callers
/// should treat converged=false as "no answer", not as zero.
SeriesResult cdf_series(const QuadFormSpec& spec, double v,
                        double tol = 1e-10, int k_max = 5000);

/// Matching density series (exponent n/2+k-1, Gamma(n/2+k)).
SeriesResult pdf_series(const QuadFormSpec& spec, double v,
                        double tol = 1e-10, int k_max = 5000);

/// Detects the noncentral chi-square special case: x^T A x ~ chi2_r(delta2)
/// iff tr(A Sigma) is a positive integer r and A Sigma A = A.
/// Returns (r, delta2 = mu^T A mu) or nothing.
std::optional<std::pair<int, double>> chi_square_case(const Eigen::MatrixXd& A,
                                                      const Eigen::VectorXd& mu,
                                                      const Eigen::MatrixXd& Sigma,
                                                      double tol);

/// Noncentral chi-square CDF via the Poisson mixture of central chi-squares,
/// truncated when the remaining mixture weight is below 1e-12.
double noncentral_chi2_cdf(int r, double delta2, double v);

} // namespace collprob
