#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "collprob/belief.hpp"
#include "collprob/geometry.hpp"
#include "collprob/riskbounds.hpp"

namespace collprob {

struct ObstacleInfo {
    Ellipsoid shape;
    Eigen::MatrixXd cov;  ///< center covariance; zero matrix when certain
};

struct PlanProblem {
    GaussianBelief initial;
    Eigen::VectorXd goal;
    int horizon = 20;
    Eigen::MatrixXd M_u;
    Eigen::MatrixXd M_g;
    Eigen::VectorXd u_min;
    Eigen::VectorXd u_max;
    double epsilon = 0.05;
    std::vector<ObstacleInfo> obstacles;
    Ellipsoid robot;  ///< shape matters; center is overridden by the belief mean
    RiskMethod method = RiskMethod::upper_bound;
    ModelPair model;

    // cross-entropy solver knobs
    int population = 256;
    int elites = 32;
    int iterations = 60;
    std::optional<Eigen::MatrixXd> warm_start;  ///< m x horizon
};

enum class PlanStatus { optimal, feasible, infeasible, max_iter };

const char* to_string(PlanStatus s);

struct PlanResult {
    Eigen::MatrixXd controls;            ///< m x horizon
    std::vector<GaussianBelief> beliefs; ///< horizon+1 entries, beliefs[0] = initial
    double objective = 0.0;
    Eigen::MatrixXd residuals;           ///< obstacles x horizon
    PlanStatus status = PlanStatus::infeasible;
};

/// Control-effort cost u^T M_u u.
double stage_cost(const Eigen::VectorXd& u, const Eigen::MatrixXd& M_u);

/// Expected terminal cost of the predicted terminal belief under the
/// innovation law: |mu_bar - goal|^2_{M_g} + tr(K^T M_g K S), S = H Sigma_bar
/// H^T + Q.
double expected_terminal_cost(const GaussianBelief& terminal_predicted,
                              const Eigen::VectorXd& goal,
                              const Eigen::MatrixXd& M_g, const ModelPair& model);

/// Chance-constraint residual for one robot belief / obstacle pair; the
/// configuration passes iff the residual is <= 0. Scale depends on method:
/// probability minus epsilon for exact/mc/center_point, the bound residual of
/// eps_safe_residual for upper_bound, and +-1 steps for bounding_volume.
/// Configurations whose sphere clearance exceeds 8 combined standard
/// deviations short-circuit to -epsilon.
double collision_constraint(const GaussianBelief& robot_position,
                            const Ellipsoid& robot_shape,
                            const Ellipsoid& obstacle,
                            const Eigen::MatrixXd& obstacle_cov, double eps,
                            RiskMethod method);

/// Receding-horizon plan: cross-entropy search over the L*m control vector,
/// beliefs rolled forward with propagate_ml, candidates ranked feasible-first
/// (by objective) then by total constraint violation. Deterministic per seed.
PlanResult plan(const PlanProblem& problem, std::uint64_t seed);

} // namespace collprob
