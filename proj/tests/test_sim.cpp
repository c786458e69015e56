#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "collprob/scene.hpp"
#include "collprob/sim.hpp"

using namespace collprob;

namespace {

ScenarioConfig empty_scenario() {
    ScenarioConfig c;
    c.start = Eigen::Vector3d(0.0, 0.0, 1.4);
    c.start_cov = Eigen::Matrix3d::Zero();
    c.robot = make_ellipsoid(Eigen::Vector3d(0.18, 0.18, 0.06),
                             Eigen::Matrix3d::Identity(), c.start);
    c.goal = Eigen::Vector3d(0.0, 4.0, 1.4);
    c.Sigma_base = 1e-12 * Eigen::Matrix3d::Identity();
    c.R = Eigen::Matrix3d::Zero();
    c.u_min = Eigen::Vector3d::Constant(-2.0);
    c.u_max = Eigen::Vector3d::Constant(2.0);
    c.population = 48;
    c.elites = 6;
    c.iterations = 20;
    return c;
}

} // namespace

TEST_CASE("no obstacles, zero noise: straight-line run") {
    ScenarioConfig c = empty_scenario();
    auto [traj, m] = run_scenario(c, RiskMethod::exact, 0);
    CHECK(m.success);
    CHECK_FALSE(m.collided);
    const double straight = (c.goal - c.start).norm();
    CHECK(m.l >= straight - c.goal_tol - 1e-9);
    CHECK(m.l <= 1.15 * straight + c.goal_tol);
    CHECK(traj.size() == static_cast<std::size_t>(m.steps + 1));
}

TEST_CASE("reproducibility per seed") {
    ScenarioConfig c = load_scenario("scenarios/single_obstacle.json");
    c.step_cap = 40;  // truncated run is enough for a determinism check
    auto [t1, m1] = run_scenario(c, RiskMethod::exact, 7);
    auto [t2, m2] = run_scenario(c, RiskMethod::exact, 7);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK((t1[i].true_pos - t2[i].true_pos).norm() == 0.0);
        CHECK((t1[i].est_pos - t2[i].est_pos).norm() == 0.0);
        CHECK(t1[i].cov_trace == t2[i].cov_trace);
    }
    CHECK(m1.l == m2.l);
    CHECK(m1.d == m2.d);

    auto [t3, m3] = run_scenario(c, RiskMethod::exact, 8);
    CHECK(m3.l != m1.l);
}

TEST_CASE("aggregate") {
    SUBCASE("single run is the identity") {
        Metrics r;
        r.d = 0.5;
        r.l = 7.0;
        r.T = 6.0;
        r.success = true;
        r.sp = 100.0;
        Metrics a = aggregate({r});
        CHECK(a.d == doctest::Approx(0.5));
        CHECK(a.d_std == 0.0);
        CHECK(a.l == doctest::Approx(7.0));
        CHECK(a.sp == 100.0);
    }

    SUBCASE("hand-computed mean and stddev") {
        std::vector<Metrics> runs;
        const double ds[3] = {0.4, 0.5, 0.9};
        for (double d : ds) {
            Metrics r;
            r.d = d;
            r.l = 10.0;
            r.T = 5.0;
            r.success = true;
            runs.push_back(r);
        }
        Metrics a = aggregate(runs);
        CHECK(a.d == doctest::Approx(0.6));
        CHECK(a.d_std == doctest::Approx(std::sqrt(0.07)));
        CHECK(a.sp == doctest::Approx(100.0));
    }

    SUBCASE("all failed") {
        Metrics r;
        r.success = false;
        r.collided = true;
        Metrics a = aggregate({r, r});
        CHECK(a.sp == 0.0);
        CHECK(std::isnan(a.d));
    }

    CHECK_THROWS(aggregate({}));
}

TEST_CASE("csv writers") {
    ScenarioConfig c = empty_scenario();
    auto [traj, m] = run_scenario(c, RiskMethod::exact, 0);
    const auto dir = std::filesystem::temp_directory_path();
    const std::string tpath = (dir / "collprob_traj.csv").string();
    const std::string mpath = (dir / "collprob_metrics.csv").string();
    write_trajectory_csv(tpath, traj);
    write_metrics_csv(mpath, {m}, aggregate({m}));

    std::ifstream tin(tpath);
    std::string line;
    std::getline(tin, line);
    CHECK(line == "# schema=1");
    std::getline(tin, line);
    CHECK(line.rfind("step,t,true_x,true_y,true_z,est_x,est_y,est_z,cov_trace",
                     0) == 0);
    int rows = 0;
    while (std::getline(tin, line))
        if (!line.empty()) ++rows;
    CHECK(rows == static_cast<int>(traj.size()));

    std::ifstream min(mpath);
    std::getline(min, line);
    CHECK(line == "# schema=1");
    std::getline(min, line);
    CHECK(line == "run,d,d_std,l,T,sp,success,collided,steps");

    std::remove(tpath.c_str());
    std::remove(mpath.c_str());
}
