#pragma once

#include <string>
#include <vector>

#include "collprob/sim.hpp"

namespace collprob {

/// One body of a scene: its ellipsoid plus center covariance (zero when the
/// file gives none).
struct SceneEntry {
    Ellipsoid shape;
    Eigen::MatrixXd cov;
};

struct SceneFile {
    SceneEntry robot;
    std::vector<SceneEntry> obstacles;
    double epsilon = 0.05;
};

/// Loads a scene JSON document. Rotations are unit quaternions [w,x,y,z] in
/// 3D or a single angle in radians in 2D; covariances are full matrices
/// ("covariance") or diagonals ("covariance_diag").
SceneFile load_scene(const std::string& path);

ScenarioConfig load_scenario(const std::string& path);

} // namespace collprob
