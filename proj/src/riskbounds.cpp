#include "collprob/riskbounds.hpp"

#include <algorithm>
#include <cmath>

#include "collprob/errors.hpp"

namespace collprob {

const char* to_string(RiskMethod m) {
    switch (m) {
        case RiskMethod::exact: return "exact";
        case RiskMethod::upper_bound: return "upper";
        case RiskMethod::mc: return "mc";
        case RiskMethod::chi2: return "chi2";
        case RiskMethod::bounding_volume: return "bounding_volume";
        case RiskMethod::center_point: return "center_point";
    }
    return "?";
}

RiskMethod risk_method_from_string(const std::string& s) {
    if (s == "exact") return RiskMethod::exact;
    if (s == "upper" || s == "upper_bound") return RiskMethod::upper_bound;
    if (s == "mc") return RiskMethod::mc;
    if (s == "chi2") return RiskMethod::chi2;
    if (s == "bounding_volume" || s == "bounding") return RiskMethod::bounding_volume;
    if (s == "center_point" || s == "center") return RiskMethod::center_point;
    throw ParseError("unknown risk method: " + s);
}

double quadform_mean(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                     const Eigen::MatrixXd& Sigma) {
    return (A * Sigma).trace() + mu.dot(A * mu);
}

double quadform_variance(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& Sigma) {
    const Eigen::MatrixXd AS = A * Sigma;
    return 2.0 * (AS * AS).trace() + 4.0 * mu.dot(A * Sigma * A * mu);
}

double compute_beta(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                    const Eigen::MatrixXd& Sigma) {
    return quadform_mean(A, mu, Sigma) +
           std::sqrt(std::max(0.0, quadform_variance(A, mu, Sigma)));
}

double upper_bound(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                   const Eigen::MatrixXd& Sigma, double threshold) {
    const double mean = quadform_mean(A, mu, Sigma);
    const double beta = compute_beta(A, mu, Sigma);
    if (beta <= threshold) return 1.0;
    return std::clamp((beta - mean) / (beta - threshold), 0.0, 1.0);
}

double eps_safe_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& Sigma, double threshold,
                         double eps) {
    if (eps <= 0.0 || eps >= 1.0)
        throw Error("eps_safe_residual: eps must be in (0, 1)");
    const double mean = quadform_mean(A, mu, Sigma);
    const double beta = compute_beta(A, mu, Sigma);
    return (beta - mean) - eps * (beta - threshold);
}

} // namespace collprob
