#include "collprob/scene.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "collprob/errors.hpp"

namespace collprob {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Eigen::VectorXd get_vector(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array())
        throw ParseError("missing or non-array field '" + key + "'");
    const auto& a = j[key];
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number())
            throw ParseError("field '" + key + "' element " + std::to_string(i) +
                             " is not a number");
        v(i) = a[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& key, int n) {
    const auto& a = j[key];
    if (!a.is_array() || static_cast<int>(a.size()) != n)
        throw ParseError("field '" + key + "' must be a " + std::to_string(n) +
                         "-row matrix");
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r) {
        if (!a[r].is_array() || static_cast<int>(a[r].size()) != n)
            throw ParseError("field '" + key + "' row " + std::to_string(r) +
                             " must have " + std::to_string(n) + " entries");
        for (int c = 0; c < n; ++c) M(r, c) = a[r][c].get<double>();
    }
    return M;
}

Eigen::MatrixXd get_covariance(const json& j, int n) {
    if (j.contains("covariance")) return get_matrix(j, "covariance", n);
    if (j.contains("covariance_diag")) {
        Eigen::VectorXd d = get_vector(j, "covariance_diag");
        if (d.size() != n)
            throw ParseError("'covariance_diag' length does not match dimension");
        return d.asDiagonal();
    }
    return Eigen::MatrixXd::Zero(n, n);
}

Eigen::MatrixXd get_rotation(const json& j, int n) {
    if (!j.contains("rotation")) return Eigen::MatrixXd::Identity(n, n);
    const auto& r = j["rotation"];
    if (n == 2) {
        if (!r.is_number())
            throw ParseError("2D 'rotation' must be an angle in radians");
        const double a = r.get<double>();
        Eigen::Matrix2d R;
        R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        return R;
    }
    if (!r.is_array() || r.size() != 4)
        throw ParseError("3D 'rotation' must be a quaternion [w,x,y,z]");
    Eigen::Quaterniond q(r[0].get<double>(), r[1].get<double>(),
                         r[2].get<double>(), r[3].get<double>());
    if (std::abs(q.norm() - 1.0) > 1e-6)
        throw ParseError("'rotation' quaternion is not unit length");
    return q.normalized().toRotationMatrix();
}

SceneEntry parse_entry(const json& j, const std::string& what) {
    try {
        Eigen::VectorXd center = get_vector(j, "center");
        Eigen::VectorXd axes = get_vector(j, "semi_axes");
        const int n = static_cast<int>(center.size());
        if (axes.size() != n)
            throw ParseError("'semi_axes' length does not match 'center'");
        SceneEntry e{make_ellipsoid(axes, get_rotation(j, n), center),
                     get_covariance(j, n)};
        return e;
    } catch (const ParseError& p) {
        throw ParseError(what + ": " + p.what());
    } catch (const Error& err) {
        throw ParseError(what + ": " + err.what());
    }
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw ParseError("field '" + key + "' must be a number");
    return j[key].get<double>();
}

} // namespace

SceneFile load_scene(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("robot")) throw ParseError(path + ": missing 'robot'");
    SceneFile scene;
    scene.robot = parse_entry(j["robot"], path + ": robot");
    if (j.contains("obstacles")) {
        if (!j["obstacles"].is_array())
            throw ParseError(path + ": 'obstacles' must be an array");
        for (std::size_t i = 0; i < j["obstacles"].size(); ++i)
            scene.obstacles.push_back(parse_entry(
                j["obstacles"][i], path + ": obstacle " + std::to_string(i)));
    }
    scene.epsilon = get_number(j, "epsilon", 0.05);
    if (scene.epsilon <= 0.0 || scene.epsilon >= 1.0)
        throw ParseError(path + ": 'epsilon' must be in (0, 1)");
    return scene;
}

ScenarioConfig load_scenario(const std::string& path) {
    const json j = load_json(path);
    ScenarioConfig c;
    try {
        c.start = get_vector(j, "start");
        const int n = static_cast<int>(c.start.size());
        c.goal = get_vector(j, "goal");
        if (c.goal.size() != n)
            throw ParseError("'goal' length does not match 'start'");

        if (!j.contains("robot")) throw ParseError("missing 'robot'");
        Eigen::VectorXd axes = get_vector(j["robot"], "semi_axes");
        c.robot = make_ellipsoid(axes, get_rotation(j["robot"], n), c.start);

        if (j.contains("start_cov"))
            c.start_cov = get_matrix(j, "start_cov", n);
        else if (j.contains("start_cov_diag"))
            c.start_cov =
                Eigen::MatrixXd(get_vector(j, "start_cov_diag").asDiagonal());
        else
            c.start_cov = Eigen::MatrixXd::Zero(n, n);

        if (j.contains("obstacles")) {
            for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
                SceneEntry e = parse_entry(
                    j["obstacles"][i], "obstacle " + std::to_string(i));
                c.obstacles.push_back({std::move(e.shape), std::move(e.cov)});
            }
        }

        if (j.contains("sigma_base"))
            c.Sigma_base = get_matrix(j, "sigma_base", n);
        else
            c.Sigma_base =
                Eigen::MatrixXd(get_vector(j, "sigma_base_diag").asDiagonal());
        if (j.contains("process_noise"))
            c.R = get_matrix(j, "process_noise", n);
        else
            c.R = Eigen::MatrixXd(
                get_vector(j, "process_noise_diag").asDiagonal());

        c.noise_scale = get_number(j, "noise_scale", 1.0);
        c.epsilon = get_number(j, "epsilon", 0.05);
        c.horizon = static_cast<int>(get_number(j, "horizon", 20));
        c.dt = get_number(j, "dt", 0.1);
        c.u_min = j.contains("u_min") ? get_vector(j, "u_min")
                                      : Eigen::VectorXd::Constant(n, -1.0);
        c.u_max = j.contains("u_max") ? get_vector(j, "u_max")
                                      : Eigen::VectorXd::Constant(n, 1.0);
        c.goal_tol = get_number(j, "goal_tol", 0.2);
        c.step_cap = static_cast<int>(get_number(j, "step_cap", 600));
        c.runs = static_cast<int>(get_number(j, "runs", 10));
        c.seed = static_cast<std::uint64_t>(get_number(j, "seed", 0));
        c.m_u_scale = get_number(j, "m_u_scale", 0.01);
        c.m_g_scale = get_number(j, "m_g_scale", 1.0);
        c.population = static_cast<int>(get_number(j, "population", 256));
        c.elites = static_cast<int>(get_number(j, "elites", 32));
        c.iterations = static_cast<int>(get_number(j, "iterations", 60));

        if (c.noise_scale <= 0.0) throw ParseError("'noise_scale' must be > 0");
        if (c.epsilon <= 0.0 || c.epsilon >= 1.0)
            throw ParseError("'epsilon' must be in (0, 1)");
    } catch (const ParseError& p) {
        throw ParseError(path + ": " + p.what());
    } catch (const Error& err) {
        throw ParseError(path + ": " + err.what());
    }
    return c;
}

} // namespace collprob
