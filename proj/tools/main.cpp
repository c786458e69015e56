#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collprob/assess.hpp"
#include "collprob/errors.hpp"
#include "collprob/scene.hpp"
#include "collprob/sim.hpp"

namespace {

using namespace collprob;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int cmd_prob(const std::string& scene_path, const std::string& method_name,
             long long mc_samples, std::uint64_t seed, double tol,
             double eps_override) {
    const SceneFile scene = load_scene(scene_path);
    const RiskMethod method = risk_method_from_string(method_name);
    AssessOptions opts;
    opts.eps = eps_override > 0.0 ? eps_override : scene.epsilon;
    opts.mc_samples = mc_samples;
    opts.seed = seed;
    opts.tol = tol;
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const auto& obs = scene.obstacles[i];
        const RiskAssessment a = assess_collision(
            scene.robot.shape, obs.shape, scene.robot.cov, obs.cov, method, opts);
        std::cout << "obstacle=" << i << " method=" << to_string(a.method)
                  << " probability=" << fmt(a.probability)
                  << " time_s=" << fmt(a.compute_time) << " feasible(eps="
                  << fmt(opts.eps) << ")=" << (a.feasible ? "yes" : "no")
                  << "\n";
    }
    return 0;
}

int cmd_bench_table1(const std::string& scene_path, const std::string& out_path,
                     long long mc_samples, std::uint64_t seed, int reps) {
    const SceneFile scene = load_scene(scene_path);
    if (scene.obstacles.empty())
        throw ParseError(scene_path + ": benchmark scene needs an obstacle");
    const auto& obs = scene.obstacles.front();
    AssessOptions opts;
    opts.eps = scene.epsilon;
    opts.mc_samples = mc_samples;
    opts.seed = seed;

    std::ofstream out(out_path);
    if (!out) throw Error("cannot open " + out_path);
    out << "# schema=1\n";
    out << "method,probability,time_s_mean,time_s_std,feasible\n";
    const RiskMethod methods[] = {RiskMethod::exact, RiskMethod::upper_bound,
                                  RiskMethod::mc, RiskMethod::bounding_volume,
                                  RiskMethod::center_point};
    for (RiskMethod m : methods) {
        double sum = 0.0, sq = 0.0;
        RiskAssessment last;
        for (int r = 0; r < reps; ++r) {
            last = assess_collision(scene.robot.shape, obs.shape,
                                    scene.robot.cov, obs.cov, m, opts);
            sum += last.compute_time;
            sq += last.compute_time * last.compute_time;
        }
        const double mean = sum / reps;
        const double var =
            reps > 1 ? std::max(0.0, (sq - reps * mean * mean) / (reps - 1)) : 0.0;
        out << to_string(m) << "," << fmt(last.probability) << "," << fmt(mean)
            << "," << fmt(std::sqrt(var)) << "," << (last.feasible ? 1 : 0)
            << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& method_name,
                 int runs_override, std::uint64_t seed, double noise_scale,
                 const std::string& out_dir) {
    ScenarioConfig config = load_scenario(scenario_path);
    const RiskMethod method = risk_method_from_string(method_name);
    if (runs_override > 0) config.runs = runs_override;
    if (noise_scale > 0.0) config.noise_scale = noise_scale;
    config.seed = seed;

    std::filesystem::create_directories(out_dir);
    std::vector<Metrics> metrics;
    for (int r = 0; r < config.runs; ++r) {
        auto [traj, m] = run_scenario(config, method, config.seed + r);
        write_trajectory_csv(out_dir + "/run_" + std::to_string(r) + ".csv", traj);
        metrics.push_back(m);
    }
    const Metrics agg = aggregate(metrics);
    write_metrics_csv(out_dir + "/metrics.csv", metrics, agg);

    nlohmann::json summary;
    summary["scenario"] = scenario_path;
    summary["method"] = to_string(method);
    summary["runs"] = config.runs;
    summary["seed"] = config.seed;
    summary["noise_scale"] = config.noise_scale;
    summary["sp"] = agg.sp;
    summary["d_mean"] = agg.d;
    summary["d_std"] = agg.d_std;
    summary["l_mean"] = agg.l;
    summary["T_mean"] = agg.T;
    std::ofstream(out_dir + "/summary.json") << summary.dump(2) << "\n";

    std::cout << "sp=" << fmt(agg.sp) << " d_mean=" << fmt(agg.d)
              << " d_std=" << fmt(agg.d_std) << " l_mean=" << fmt(agg.l)
              << " T_mean=" << fmt(agg.T) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collision probabilities between Gaussian-uncertain ellipsoids"};
    app.require_subcommand(1);

    std::string scene_path, scenario_path, method = "exact";
    std::string out_path = "bench_table1.csv", out_dir = "sim_out";
    long long mc_samples = 1000000;
    std::uint64_t seed = 0;
    double tol = 1e-10, eps = -1.0, noise_scale = -1.0;
    int runs = -1, reps = 20;

    auto* prob = app.add_subcommand("prob", "Collision probability per obstacle");
    prob->add_option("scene", scene_path, "scene JSON file")->required();
    prob->add_option("--method", method, "exact|upper|mc|chi2|bounding_volume|center_point");
    prob->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    prob->add_option("--seed", seed, "RNG seed (default 0)");
    prob->add_option("--tol", tol, "series tolerance");
    prob->add_option("--eps", eps, "feasibility threshold override");

    auto* bench = app.add_subcommand("bench-table1", "Benchmark all methods on a scene");
    bench->add_option("scene", scene_path, "scene JSON file")->required();
    bench->add_option("--out", out_path, "output CSV path");
    bench->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    bench->add_option("--seed", seed, "RNG seed (default 0)");
    bench->add_option("--reps", reps, "timing repetitions");

    auto* sim = app.add_subcommand("simulate", "Closed-loop scenario runs");
    sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sim->add_option("--method", method, "planner risk method");
    sim->add_option("--runs", runs, "number of runs override");
    sim->add_option("--seed", seed, "master seed (default 0)");
    sim->add_option("--noise-scale", noise_scale, "measurement noise scale override");
    sim->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (prob->parsed())
            return cmd_prob(scene_path, method, mc_samples, seed, tol, eps);
        if (bench->parsed())
            return cmd_bench_table1(scene_path, out_path, mc_samples, seed, reps);
        if (sim->parsed())
            return cmd_simulate(scenario_path, method, runs, seed, noise_scale,
                                out_dir);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const collprob::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
