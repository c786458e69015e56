#include "collprob/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "collprob/baselines.hpp"
#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"
#include "collprob/mc.hpp"
#include "collprob/quadform.hpp"
#include "collprob/rng.hpp"

namespace collprob {

namespace {
constexpr std::uint64_t mc_fallback_seed = 0x51ab;
constexpr long long mc_fallback_samples = 8192;
} // namespace

const char* to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::optimal: return "optimal";
        case PlanStatus::feasible: return "feasible";
        case PlanStatus::infeasible: return "infeasible";
        case PlanStatus::max_iter: return "max_iter";
    }
    return "?";
}

double stage_cost(const Eigen::VectorXd& u, const Eigen::MatrixXd& M_u) {
    return u.dot(M_u * u);
}

double expected_terminal_cost(const GaussianBelief& terminal_predicted,
                              const Eigen::VectorXd& goal,
                              const Eigen::MatrixXd& M_g, const ModelPair& model) {
    const Eigen::VectorXd e = terminal_predicted.mean - goal;
    const Eigen::MatrixXd H = model.H(terminal_predicted.mean);
    const Eigen::MatrixXd S =
        symmetrize(H * terminal_predicted.cov * H.transpose() + model.Q);
    const Eigen::MatrixXd K = terminal_predicted.cov * H.transpose() *
        S.ldlt().solve(Eigen::MatrixXd::Identity(S.rows(), S.cols()));
    return e.dot(M_g * e) + (K.transpose() * M_g * K * S).trace();
}

double collision_constraint(const GaussianBelief& robot_position,
                            const Ellipsoid& robot_shape,
                            const Ellipsoid& obstacle,
                            const Eigen::MatrixXd& obstacle_cov, double eps,
                            RiskMethod method) {
    if (eps <= 0.0 || eps >= 1.0)
        throw Error("collision_constraint: eps must be in (0, 1)");
    const Eigen::MatrixXd Sigma_y = symmetrize(robot_position.cov + obstacle_cov);
    const Eigen::VectorXd mu_y = obstacle.center - robot_position.mean;
    const Ellipsoid robot = robot_shape.at(robot_position.mean);

    const double tr = std::max(0.0, Sigma_y.trace());
    const double sigma_cap = std::sqrt(tr);
    const double clearance =
        mu_y.norm() - robot.max_semi_axis() - obstacle.max_semi_axis();
    // collision puts the offset in a half-space at distance `clearance` along
    // mu_y, so the probability is at most Phi(-clearance / sigma_cap)
    if (clearance > 0.0 && sigma_cap > 0.0) {
        const double tail =
            0.5 * std::erfc(clearance / (sigma_cap * std::sqrt(2.0)));
        if (tail <= 1e-2 * eps) return tail - eps;
    }

    if (mu_y.cwiseAbs().maxCoeff() <= 1e-12) return 1.0 - eps;

    if (tr <= 1e-14) {
        // deterministic configuration
        return intersects(robot, obstacle) ? 1.0 - eps : -eps;
    }

    switch (method) {
        case RiskMethod::upper_bound: {
            const ContactResult c = contact_point(robot, obstacle);
            return eps_safe_residual(c.collision_matrix, mu_y, Sigma_y,
                                     c.threshold, eps);
        }
        case RiskMethod::exact:
        case RiskMethod::chi2: {
            const ContactResult c = contact_point(robot, obstacle);
            if (method == RiskMethod::chi2) {
                if (auto cs = chi_square_case(c.collision_matrix, mu_y, Sigma_y, 1e-9))
                    return noncentral_chi2_cdf(cs->first, cs->second, c.threshold) - eps;
            }
            const QuadFormSpec spec = standardize(c.collision_matrix, mu_y, Sigma_y);
            const SeriesResult sr = cdf_series(spec, c.threshold);
            if (sr.converged) return sr.value - eps;
            const McEstimate mc = mc_collision_probability(
                robot, obstacle, robot_position.cov, obstacle_cov,
                mc_fallback_samples, mc_fallback_seed);
            return mc.probability - eps;
        }
        case RiskMethod::mc: {
            const McEstimate mc = mc_collision_probability(
                robot, obstacle, robot_position.cov, obstacle_cov,
                mc_fallback_samples, mc_fallback_seed);
            return mc.probability - eps;
        }
        case RiskMethod::bounding_volume:
            return bounding_volume_check(robot, obstacle, Sigma_y) > 0.5
                       ? 1.0 - eps
                       : -eps;
        case RiskMethod::center_point:
            return center_point_probability(robot, obstacle, Sigma_y) - eps;
    }
    throw Error("collision_constraint: unknown method");
}

namespace {

struct Rollout {
    std::vector<GaussianBelief> beliefs;
    Eigen::MatrixXd residuals;
    double objective = 0.0;
    double violation = 0.0;
};

Rollout evaluate(const PlanProblem& p, const Eigen::MatrixXd& controls) {
    const int L = p.horizon;
    const auto n_obs = static_cast<Eigen::Index>(p.obstacles.size());
    Rollout r;
    r.beliefs.reserve(L + 1);
    r.beliefs.push_back(p.initial);
    r.residuals.resize(n_obs, L);
    GaussianBelief belief = p.initial;
    for (int l = 0; l < L; ++l) {
        const Eigen::VectorXd u = controls.col(l);
        r.objective += stage_cost(u, p.M_u);
        const GaussianBelief predicted = ekf_predict(belief, u, p.model);
        if (l == L - 1)
            r.objective += expected_terminal_cost(predicted, p.goal, p.M_g, p.model);
        belief = ekf_update(predicted, p.model.h(predicted.mean), p.model);
        r.beliefs.push_back(belief);
        for (Eigen::Index o = 0; o < n_obs; ++o) {
            const double res =
                collision_constraint(belief, p.robot, p.obstacles[o].shape,
                                     p.obstacles[o].cov, p.epsilon, p.method);
            r.residuals(o, l) = res;
            r.violation += std::max(0.0, res);
        }
    }
    return r;
}

bool better(const Rollout& a, const Rollout& b) {
    const bool fa = a.violation <= 0.0;
    const bool fb = b.violation <= 0.0;
    if (fa != fb) return fa;
    if (fa) return a.objective < b.objective;
    return a.violation < b.violation;
}

Eigen::MatrixXd clamp_controls(Eigen::MatrixXd u, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi) {
    for (Eigen::Index c = 0; c < u.cols(); ++c)
        u.col(c) = u.col(c).cwiseMax(lo).cwiseMin(hi);
    return u;
}

} // namespace

PlanResult plan(const PlanProblem& p, std::uint64_t seed) {
    const int L = p.horizon;
    const auto m = p.u_min.size();
    if (L < 1) throw Error("plan: horizon must be >= 1");
    if (p.epsilon <= 0.0 || p.epsilon >= 1.0)
        throw Error("plan: epsilon must be in (0, 1)");
    if (m != p.u_max.size() || !(p.u_min.array() <= p.u_max.array()).all() ||
        !p.u_min.allFinite() || !p.u_max.allFinite())
        throw Error("plan: invalid control box");

    Rng rng(seed);

    Eigen::MatrixXd mean(m, L);
    if (p.warm_start && p.warm_start->rows() == m && p.warm_start->cols() == L) {
        mean = clamp_controls(*p.warm_start, p.u_min, p.u_max);
    } else {
        const Eigen::VectorXd toward = (p.goal - p.initial.mean)
                                           .cwiseMax(p.u_min)
                                           .cwiseMin(p.u_max);
        mean = toward.replicate(1, L);
    }
    const Eigen::VectorXd width = p.u_max - p.u_min;
    Eigen::MatrixXd sigma = (0.5 * width).replicate(1, L);
    const double sigma_floor = 1e-4 * std::max(1e-12, width.maxCoeff());

    Eigen::MatrixXd best_controls = mean;
    Rollout best = evaluate(p, best_controls);

    std::vector<Eigen::MatrixXd> cand(p.population);
    std::vector<Rollout> rolls(p.population);
    std::vector<int> order(p.population);

    bool converged = false;
    double prev_best_obj = std::numeric_limits<double>::infinity();
    double prev_best_violation = best.violation;
    int stall = 0;
    int infeasible_stall = 0;
    int it = 0;
    for (; it < p.iterations; ++it) {
        for (int c = 0; c < p.population; ++c) {
            if (c == 0) {
                cand[c] = best_controls;
            } else {
                Eigen::MatrixXd u(m, L);
                for (int l = 0; l < L; ++l)
                    for (Eigen::Index i = 0; i < m; ++i)
                        u(i, l) = mean(i, l) + sigma(i, l) * rng.normal();
                cand[c] = clamp_controls(std::move(u), p.u_min, p.u_max);
            }
            rolls[c] = evaluate(p, cand[c]);
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return better(rolls[a], rolls[b]); });
        if (better(rolls[order[0]], best)) {
            best = rolls[order[0]];
            best_controls = cand[order[0]];
        }

        const int n_elite = std::min(p.elites, p.population);
        Eigen::MatrixXd e_mean = Eigen::MatrixXd::Zero(m, L);
        for (int e = 0; e < n_elite; ++e) e_mean += cand[order[e]];
        e_mean /= n_elite;
        Eigen::MatrixXd e_var = Eigen::MatrixXd::Zero(m, L);
        for (int e = 0; e < n_elite; ++e)
            e_var += (cand[order[e]] - e_mean).array().square().matrix();
        e_var /= n_elite;
        mean = 0.9 * e_mean + 0.1 * mean;
        sigma = (0.9 * e_var.array().sqrt() + 0.1 * sigma.array())
                    .max(sigma_floor)
                    .matrix();

        if (best.violation <= 0.0) {
            const double rel =
                std::abs(prev_best_obj - best.objective) /
                std::max(1.0, std::abs(best.objective));
            stall = rel < 1e-5 ? stall + 1 : 0;
            prev_best_obj = best.objective;
            if (stall >= 3 || sigma.maxCoeff() < 1e-3) {
                converged = true;
                ++it;
                break;
            }
        } else {
            infeasible_stall =
                prev_best_violation - best.violation < 1e-9 ? infeasible_stall + 1 : 0;
            prev_best_violation = best.violation;
            if (infeasible_stall >= 10) break;
        }
    }

    PlanResult res;
    res.controls = best_controls;
    res.beliefs = best.beliefs;
    res.objective = best.objective;
    res.residuals = best.residuals;
    if (best.violation <= 0.0)
        res.status = converged ? PlanStatus::optimal : PlanStatus::feasible;
    else
        res.status = it < p.iterations ? PlanStatus::infeasible : PlanStatus::max_iter;
    return res;
}

} // namespace collprob
