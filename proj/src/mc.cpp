#include "collprob/mc.hpp"

#include <cmath>

#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"
#include "collprob/rng.hpp"

namespace collprob {

namespace {

void check_covariance(const Eigen::MatrixXd& S, int n, const char* name) {
    if (S.rows() != n || S.cols() != n)
        throw Error(std::string("mc_collision_probability: ") + name +
                    " has wrong dimensions");
    if (!is_symmetric(S, 1e-10))
        throw Error(std::string("mc_collision_probability: ") + name +
                    " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(S));
    if (es.eigenvalues().minCoeff() <
        -1e-10 * std::max(1.0, es.eigenvalues().maxCoeff()))
        throw Error(std::string("mc_collision_probability: ") + name +
                    " is not positive semi-definite");
}

} // namespace

McEstimate mc_collision_probability(const Ellipsoid& robot,
                                    const Ellipsoid& obstacle,
                                    const Eigen::MatrixXd& Sigma_robot,
                                    const Eigen::MatrixXd& Sigma_obstacle,
                                    long long samples, std::uint64_t seed) {
    const int n = robot.dim();
    if (obstacle.dim() != n)
        throw InvalidEllipsoid("mc_collision_probability: dimension mismatch");
    if (samples < 1)
        throw Error("mc_collision_probability: samples must be >= 1");
    check_covariance(Sigma_robot, n, "Sigma_robot");
    check_covariance(Sigma_obstacle, n, "Sigma_obstacle");

    const Eigen::VectorXd mu = obstacle.center - robot.center;
    const Eigen::MatrixXd L = sym_sqrt(Sigma_robot + Sigma_obstacle);

    Ellipsoid moved = obstacle;
    Eigen::VectorXd z(n);
    long long hits = 0;
    long long indeterminate = 0;
    long long done = 0;
    for (std::uint64_t chunk = 0; done < samples; ++chunk) {
        Rng rng(seed + chunk);
        const long long count = std::min(mc_chunk_size, samples - done);
        for (long long s = 0; s < count; ++s) {
            for (int i = 0; i < n; ++i) z(i) = rng.normal();
            moved.center = robot.center + mu + L * z;
            try {
                if (intersects(robot, moved)) ++hits;
            } catch (const Error&) {
                ++indeterminate;
            }
        }
        done += count;
    }

    if (indeterminate > 1e-4 * static_cast<double>(samples))
        throw OracleDegenerate(
            "mc_collision_probability: indeterminate sample fraction exceeds 1e-4");

    McEstimate est;
    est.samples = samples;
    est.seed = seed;
    const long long valid = samples - indeterminate;
    est.probability = valid > 0 ? static_cast<double>(hits) / valid : 0.0;
    est.std_error = valid > 0
        ? std::sqrt(est.probability * (1.0 - est.probability) / valid)
        : 0.0;
    return est;
}

} // namespace collprob
