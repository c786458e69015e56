#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace collprob {

/// Gaussian belief over the robot state.
struct GaussianBelief {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    /// Row-major flattening of cov appended to the mean.
    Eigen::VectorXd flattened() const;
};

/// Motion model f with Jacobian F and process noise R, observation model h
/// with Jacobian H and measurement noise Q.
struct ModelPair {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> f;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> F;
    Eigen::MatrixXd R;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> h;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> H;
    Eigen::MatrixXd Q;
};

/// Velocity-controlled point mass x' = x + u dt observed directly.
ModelPair point_mass_model(double dt, const Eigen::MatrixXd& R,
                           const Eigen::MatrixXd& Q);

GaussianBelief ekf_predict(const GaussianBelief& belief, const Eigen::VectorXd& u,
                           const ModelPair& model);

GaussianBelief ekf_update(const GaussianBelief& predicted, const Eigen::VectorXd& z,
                          const ModelPair& model);

/// H Sigma_bar H^T + Q for a predicted belief.
Eigen::MatrixXd innovation_covariance(const GaussianBelief& predicted,
                                      const ModelPair& model);

/// Deterministic planner rollout: predict, then update with the
/// maximum-likelihood observation z = h(mu_bar) (zero innovation).
GaussianBelief propagate_ml(const GaussianBelief& belief, const Eigen::VectorXd& u,
                            const ModelPair& model);

/// One realization of the stochastic belief dynamics: draws the innovation
/// w ~ N(0, H Sigma_bar H^T + Q) and returns mean mu_bar + K w with the
/// (innovation-independent) updated covariance.
GaussianBelief sample_belief_transition(const GaussianBelief& belief,
                                        const Eigen::VectorXd& u,
                                        const ModelPair& model, std::uint64_t seed);

} // namespace collprob
