#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collprob/planner.hpp"

namespace collprob {

struct ScenarioConfig {
    Eigen::VectorXd start;
    Eigen::MatrixXd start_cov;
    Ellipsoid robot;
    Eigen::VectorXd goal;
    std::vector<ObstacleInfo> obstacles;
    Eigen::MatrixXd Sigma_base;  ///< base measurement noise, scaled by noise_scale
    double noise_scale = 1.0;
    Eigen::MatrixXd R;           ///< process noise
    double epsilon = 0.05;
    int horizon = 20;
    double dt = 0.1;
    Eigen::VectorXd u_min;
    Eigen::VectorXd u_max;
    double goal_tol = 0.2;
    int step_cap = 600;
    int runs = 10;
    std::uint64_t seed = 0;
    double m_u_scale = 0.01;  ///< M_u = m_u_scale * I
    double m_g_scale = 1.0;   ///< M_g = m_g_scale * I

    int population = 256;
    int elites = 32;
    int iterations = 60;
};

struct TrajectoryPoint {
    int step = 0;
    double t = 0.0;
    Eigen::VectorXd true_pos;
    Eigen::VectorXd est_pos;
    Eigen::MatrixXd est_cov;
    double cov_trace = 0.0;
    std::vector<double> residuals;  ///< one per obstacle, at the updated belief
};

using Trajectory = std::vector<TrajectoryPoint>;

struct Metrics {
    double d = 0.0;      ///< min robot-obstacle surface distance over the run
    double d_std = 0.0;  ///< across runs (aggregate only)
    double l = 0.0;      ///< trajectory length
    double T = 0.0;      ///< duration
    double sp = 0.0;     ///< success percentage
    bool collided = false;
    bool success = false;
    int steps = 0;
};

/// One closed-loop run: replan each step, apply the first control through the
/// noisy truth dynamics, measure, EKF-update, until the belief mean is within
/// goal_tol of the goal or the step cap hits. Truth obstacles sit at their
/// nominal centers; obstacle covariance only widens the planning constraint.
/// Deterministic per (config, method, seed).
std::pair<Trajectory, Metrics> run_scenario(const ScenarioConfig& config,
                                            RiskMethod method, std::uint64_t seed);

/// Mean/std of d over successful runs, mean l and T, success percentage.
Metrics aggregate(const std::vector<Metrics>& runs);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_metrics_csv(const std::string& path, const std::vector<Metrics>& runs,
                       const Metrics& agg);

} // namespace collprob
