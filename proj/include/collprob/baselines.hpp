#pragma once

#include <Eigen/Dense>

#include "collprob/geometry.hpp"

namespace collprob {

/// Binary 3-sigma-style check: inflates the robot by the n_sigma uncertainty
/// ellipsoid of the relative covariance and intersects with the obstacle.
///
/// The Minkowski sum of two ellipsoids is not an ellipsoid; we use the outer
/// approximation that adds n_sigma times the uncertainty standard deviation
/// along each robot principal axis to that semi-axis.
double bounding_volume_check(const Ellipsoid& robot, const Ellipsoid& obstacle,
                             const Eigen::MatrixXd& Sigma, double n_sigma = 3.0);

/// Center-point approximation: robot volume times the Gaussian density of
/// the relative position evaluated at zero offset, clamped to [0,1].
double center_point_probability(const Ellipsoid& robot, const Ellipsoid& obstacle,
                                const Eigen::MatrixXd& Sigma);

} // namespace collprob
