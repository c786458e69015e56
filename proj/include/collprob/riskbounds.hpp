#pragma once

#include <string>

#include <Eigen/Dense>

namespace collprob {

enum class RiskMethod { exact, upper_bound, mc, chi2, bounding_volume, center_point };

const char* to_string(RiskMethod m);
RiskMethod risk_method_from_string(const std::string& s);

struct RiskAssessment {
    RiskMethod method = RiskMethod::exact;
    double probability = 0.0;
    bool feasible = false;  ///< probability <= epsilon
    double compute_time = 0.0;
};

/// E[x^T A x] = tr(A Sigma) + mu^T A mu for x ~ N(mu, Sigma).
double quadform_mean(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                     const Eigen::MatrixXd& Sigma);

/// Var(x^T A x) = 2 tr((A Sigma)^2) + 4 mu^T A Sigma A mu.
double quadform_variance(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& Sigma);

/// beta = E + sqrt(Var), the one-sigma endpoint used as the support proxy in
/// the reverse Markov bound.
double compute_beta(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                    const Eigen::MatrixXd& Sigma);

/// Reverse-Markov upper bound on P(x^T A x <= threshold), clamped to [0,1];
/// returns 1 when beta <= threshold (bound vacuous).
double upper_bound(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                   const Eigen::MatrixXd& Sigma, double threshold);

/// Constraint residual (beta - E) - eps (beta - threshold); the
/// configuration is eps-safe by the bound iff the residual is <= 0.
double eps_safe_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& Sigma, double threshold,
                         double eps);

} // namespace collprob
