#include "collprob/assess.hpp"

#include <chrono>

#include "collprob/baselines.hpp"
#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"
#include "collprob/mc.hpp"
#include "collprob/quadform.hpp"

namespace collprob {

RiskAssessment assess_collision(const Ellipsoid& robot, const Ellipsoid& obstacle,
                                const Eigen::MatrixXd& Sigma_robot,
                                const Eigen::MatrixXd& Sigma_obstacle,
                                RiskMethod method, const AssessOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::MatrixXd Sigma_y = symmetrize(Sigma_robot + Sigma_obstacle);
    const Eigen::VectorXd mu_y = obstacle.center - robot.center;

    const bool degenerate =
        Sigma_y.cwiseAbs().maxCoeff() <= 1e-14;

    RiskAssessment res;
    res.method = method;
    switch (method) {
        case RiskMethod::exact:
        case RiskMethod::chi2: {
            if (degenerate) {
                res.probability = intersects(robot, obstacle) ? 1.0 : 0.0;
                break;
            }
            const ContactResult c = contact_point(robot, obstacle);
            if (method == RiskMethod::chi2) {
                const auto cs =
                    chi_square_case(c.collision_matrix, mu_y, Sigma_y, 1e-9);
                if (!cs)
                    throw Error(
                        "assess_collision: configuration is not a chi-square case");
                res.probability =
                    noncentral_chi2_cdf(cs->first, cs->second, c.threshold);
                break;
            }
            const QuadFormSpec spec = standardize(c.collision_matrix, mu_y, Sigma_y);
            const SeriesResult sr = cdf_series(spec, c.threshold, opts.tol);
            if (!sr.converged)
                throw NotConverged(
                    "assess_collision: cdf series did not converge");
            res.probability = sr.value;
            break;
        }
        case RiskMethod::upper_bound: {
            if (degenerate) {
                res.probability = intersects(robot, obstacle) ? 1.0 : 0.0;
                break;
            }
            const ContactResult c = contact_point(robot, obstacle);
            res.probability =
                upper_bound(c.collision_matrix, mu_y, Sigma_y, c.threshold);
            break;
        }
        case RiskMethod::mc: {
            const McEstimate mc = mc_collision_probability(
                robot, obstacle, Sigma_robot, Sigma_obstacle, opts.mc_samples,
                opts.seed);
            res.probability = mc.probability;
            break;
        }
        case RiskMethod::bounding_volume:
            res.probability = bounding_volume_check(robot, obstacle, Sigma_y);
            break;
        case RiskMethod::center_point:
            res.probability = center_point_probability(robot, obstacle, Sigma_y);
            break;
    }
    res.feasible = res.probability <= opts.eps;
    res.compute_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return res;
}

} // namespace collprob
