#include "collprob/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"

namespace collprob {

double bounding_volume_check(const Ellipsoid& robot, const Ellipsoid& obstacle,
                             const Eigen::MatrixXd& Sigma, double n_sigma) {
    if (n_sigma <= 0.0)
        throw Error("bounding_volume_check: n_sigma must be positive");
    const int n = robot.dim();
    if (Sigma.rows() != n || Sigma.cols() != n || !is_symmetric(Sigma, 1e-10))
        throw Error("bounding_volume_check: invalid covariance");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(robot.shape);
    Eigen::VectorXd axes(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd v = es.eigenvectors().col(i);
        const double a = 1.0 / std::sqrt(es.eigenvalues()(i));
        const double sigma_dir = std::sqrt(std::max(0.0, v.dot(Sigma * v)));
        axes(i) = a + n_sigma * sigma_dir;
    }
    Ellipsoid inflated =
        make_ellipsoid(axes, es.eigenvectors(), robot.center);
    return intersects(inflated, obstacle) ? 1.0 : 0.0;
}

double center_point_probability(const Ellipsoid& robot, const Ellipsoid& obstacle,
                                const Eigen::MatrixXd& Sigma) {
    const int n = robot.dim();
    if (Sigma.rows() != n || Sigma.cols() != n || !is_symmetric(Sigma, 1e-10))
        throw SingularSigma("center_point_probability: invalid covariance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(Sigma));
    if (es.eigenvalues().minCoeff() <=
        1e-12 * std::max(0.0, es.eigenvalues().maxCoeff()))
        throw SingularSigma("center_point_probability: Sigma is singular");

    const Eigen::VectorXd mu = obstacle.center - robot.center;
    const double quad = mu.dot(Sigma.ldlt().solve(mu));
    const double log_det = es.eigenvalues().array().log().sum();
    const double two_pi = 6.283185307179586476925286766559;
    const double density =
        std::exp(-0.5 * quad - 0.5 * log_det - 0.5 * n * std::log(two_pi));
    return std::clamp(robot.volume() * density, 0.0, 1.0);
}

} // namespace collprob
