#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "collprob/geometry.hpp"
#include "collprob/riskbounds.hpp"

namespace collprob {

struct AssessOptions {
    double eps = 0.05;
    long long mc_samples = 1000000;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

/// Evaluates the collision probability between two Gaussian-uncertain
/// ellipsoids with the chosen method, timing the computation. The center
/// offset is treated as y ~ N(mu_c - mu_b, Sigma_robot + Sigma_obstacle).
/// Throws NotConverged when the exact series fails, and Error when the chi2
/// method is requested for a non-chi-square configuration.
RiskAssessment assess_collision(const Ellipsoid& robot, const Ellipsoid& obstacle,
                                const Eigen::MatrixXd& Sigma_robot,
                                const Eigen::MatrixXd& Sigma_obstacle,
                                RiskMethod method,
                                const AssessOptions& opts = {});

} // namespace collprob
