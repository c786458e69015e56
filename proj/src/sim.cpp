#include "collprob/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"
#include "collprob/rng.hpp"

namespace collprob {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Eigen::VectorXd draw_normal(Rng& rng, const Eigen::MatrixXd& L) {
    Eigen::VectorXd z(L.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    return L * z;
}

} // namespace

std::pair<Trajectory, Metrics> run_scenario(const ScenarioConfig& config,
                                            RiskMethod method, std::uint64_t seed) {
    const int n = static_cast<int>(config.start.size());
    const ModelPair model =
        point_mass_model(config.dt, config.R,
                         config.noise_scale * config.Sigma_base);
    const Eigen::MatrixXd L_start = sym_sqrt(config.start_cov);
    const Eigen::MatrixXd L_proc = sym_sqrt(config.R);
    const Eigen::MatrixXd L_meas =
        sym_sqrt(config.noise_scale * config.Sigma_base);

    Rng rng(seed);
    Eigen::VectorXd x_true = config.start + draw_normal(rng, L_start);
    GaussianBelief belief{config.start, config.start_cov};

    PlanProblem prob;
    prob.goal = config.goal;
    prob.horizon = config.horizon;
    prob.M_u = config.m_u_scale * Eigen::MatrixXd::Identity(n, n);
    prob.M_g = config.m_g_scale * Eigen::MatrixXd::Identity(n, n);
    prob.u_min = config.u_min;
    prob.u_max = config.u_max;
    prob.epsilon = config.epsilon;
    prob.obstacles = config.obstacles;
    prob.robot = config.robot;
    prob.method = method;
    prob.model = model;
    prob.population = config.population;
    prob.elites = config.elites;
    prob.iterations = config.iterations;
    prob.initial = belief;

    Metrics m;
    m.d = std::numeric_limits<double>::infinity();
    Trajectory traj;

    auto record = [&](int step) {
        TrajectoryPoint pt;
        pt.step = step;
        pt.t = step * config.dt;
        pt.true_pos = x_true;
        pt.est_pos = belief.mean;
        pt.est_cov = belief.cov;
        pt.cov_trace = belief.cov.trace();
        for (const auto& obs : config.obstacles)
            pt.residuals.push_back(collision_constraint(
                belief, config.robot, obs.shape, obs.cov, config.epsilon, method));
        traj.push_back(std::move(pt));
    };

    auto observe = [&](int /*step*/) {
        const Ellipsoid robot_true = config.robot.at(x_true);
        for (const auto& obs : config.obstacles) {
            m.d = std::min(m.d, surface_distance(robot_true, obs.shape));
            if (intersects(robot_true, obs.shape)) m.collided = true;
        }
    };

    record(0);
    observe(0);

    for (int step = 0; step < config.step_cap && !m.collided; ++step) {
        if ((belief.mean - config.goal).norm() <= config.goal_tol) {
            m.success = true;
            break;
        }
        const PlanResult pr = plan(prob, seed ^ (0x9e3779b97f4a7c15ull *
                                                 static_cast<std::uint64_t>(step + 1)));
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        if (pr.status == PlanStatus::optimal || pr.status == PlanStatus::feasible)
            u = pr.controls.col(0);

        // shift the plan one step for the next warm start
        Eigen::MatrixXd ws(n, config.horizon);
        ws.leftCols(config.horizon - 1) = pr.controls.rightCols(config.horizon - 1);
        ws.col(config.horizon - 1) = pr.controls.col(config.horizon - 1);
        prob.warm_start = ws;

        const Eigen::VectorXd x_next =
            model.f(x_true, u) + draw_normal(rng, L_proc);
        m.l += (x_next - x_true).norm();
        x_true = x_next;
        const Eigen::VectorXd z = model.h(x_true) + draw_normal(rng, L_meas);
        belief = ekf_update(ekf_predict(belief, u, model), z, model);
        prob.initial = belief;

        m.steps = step + 1;
        record(m.steps);
        observe(m.steps);
    }
    if (!m.success && !m.collided &&
        (belief.mean - config.goal).norm() <= config.goal_tol)
        m.success = true;
    if (m.collided) m.success = false;

    m.T = m.steps * config.dt;
    m.sp = m.success ? 100.0 : 0.0;
    if (!std::isfinite(m.d)) m.d = 0.0;
    return {std::move(traj), m};
}

Metrics aggregate(const std::vector<Metrics>& runs) {
    if (runs.empty()) throw Error("aggregate: needs at least one run");
    Metrics agg;
    int successes = 0;
    double d_sum = 0.0, d_sq = 0.0, l_sum = 0.0, T_sum = 0.0;
    for (const auto& r : runs) {
        if (r.success) {
            ++successes;
            d_sum += r.d;
            d_sq += r.d * r.d;
            l_sum += r.l;
            T_sum += r.T;
        }
        if (r.collided) agg.collided = true;
    }
    agg.sp = 100.0 * successes / static_cast<double>(runs.size());
    agg.success = successes == static_cast<int>(runs.size());
    if (successes > 0) {
        agg.d = d_sum / successes;
        agg.l = l_sum / successes;
        agg.T = T_sum / successes;
        if (successes > 1) {
            const double var =
                (d_sq - successes * agg.d * agg.d) / (successes - 1);
            agg.d_std = std::sqrt(std::max(0.0, var));
        }
    } else {
        agg.d = std::numeric_limits<double>::quiet_NaN();
        agg.l = std::numeric_limits<double>::quiet_NaN();
        agg.T = std::numeric_limits<double>::quiet_NaN();
    }
    return agg;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw Error("write_trajectory_csv: cannot open " + path);
    out << "# schema=1\n";
    const int n = traj.empty() ? 3 : static_cast<int>(traj.front().true_pos.size());
    const char axes[3] = {'x', 'y', 'z'};
    out << "step,t";
    for (int i = 0; i < n; ++i) out << ",true_" << axes[i];
    for (int i = 0; i < n; ++i) out << ",est_" << axes[i];
    out << ",cov_trace";
    const std::size_t n_obs = traj.empty() ? 0 : traj.front().residuals.size();
    for (std::size_t o = 0; o < n_obs; ++o) out << ",residual_" << o;
    out << "\n";
    for (const auto& pt : traj) {
        out << pt.step << "," << fmt(pt.t);
        for (int i = 0; i < n; ++i) out << "," << fmt(pt.true_pos(i));
        for (int i = 0; i < n; ++i) out << "," << fmt(pt.est_pos(i));
        out << "," << fmt(pt.cov_trace);
        for (double r : pt.residuals) out << "," << fmt(r);
        out << "\n";
    }
}

void write_metrics_csv(const std::string& path, const std::vector<Metrics>& runs,
                       const Metrics& agg) {
    std::ofstream out(path);
    if (!out) throw Error("write_metrics_csv: cannot open " + path);
    out << "# schema=1\n";
    out << "run,d,d_std,l,T,sp,success,collided,steps\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        out << i << "," << fmt(r.d) << "," << fmt(r.d_std) << "," << fmt(r.l)
            << "," << fmt(r.T) << "," << fmt(r.sp) << "," << (r.success ? 1 : 0)
            << "," << (r.collided ? 1 : 0) << "," << r.steps << "\n";
    }
    out << "aggregate," << fmt(agg.d) << "," << fmt(agg.d_std) << ","
        << fmt(agg.l) << "," << fmt(agg.T) << "," << fmt(agg.sp) << ","
        << (agg.success ? 1 : 0) << "," << (agg.collided ? 1 : 0) << ",\n";
}

} // namespace collprob
