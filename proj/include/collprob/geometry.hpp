#pragma once

#include <Eigen/Dense>

namespace collprob {

/// Solid ellipsoid { x : (x - center)^T shape (x - center) <= 1 }.
///
/// shape is symmetric positive definite (units 1/m^2); dimension 2 or 3.
struct Ellipsoid {
    Eigen::MatrixXd shape;
    Eigen::VectorXd center;

    /// Unit sphere at the origin (3D).
    Ellipsoid();

    Ellipsoid(Eigen::MatrixXd shape_in, Eigen::VectorXd center_in);

    int dim() const { return static_cast<int>(center.size()); }

    bool contains(const Eigen::VectorXd& p) const {
        Eigen::VectorXd d = p - center;
        return d.dot(shape * d) <= 1.0;
    }

    /// Semi-axis lengths, descending.
    Eigen::VectorXd semi_axes() const;

    /// Longest / shortest semi-axis (cached at construction, used by the
    /// sphere-based fast paths).
    double max_semi_axis() const { return max_axis_; }
    double min_semi_axis() const { return min_axis_; }

    double volume() const;

    /// Same shape, different center.
    Ellipsoid at(const Eigen::VectorXd& new_center) const;

private:
    double max_axis_ = 0.0;
    double min_axis_ = 0.0;
};

/// Build an ellipsoid from semi-axis lengths and an orthonormal rotation:
/// shape = R diag(1/a_i^2) R^T.
Ellipsoid make_ellipsoid(const Eigen::VectorXd& semi_axes,
                         const Eigen::MatrixXd& rotation,
                         const Eigen::VectorXd& center);

/// Outcome of the level-surface contact computation between E1(B, b) and
/// E2(C, c): the touch point x* on the boundary of E2, the minimal real
/// eigenvalue lambda0 of the 2n x 2n pencil matrix, the collision matrix
/// A = D^T B D and the threshold 1/lambda0^2 of the test  y^T A y <= thr
/// with y = c - b.
struct ContactResult {
    Eigen::VectorXd x_star;
    double lambda0;
    double threshold;
    Eigen::MatrixXd collision_matrix;
};

ContactResult contact_point(const Ellipsoid& E1, const Ellipsoid& E2);

/// Deterministic intersection test. Exact: sphere shells give a quick
/// accept/reject, everything else goes through contact_point.
/// Coincident centers intersect by definition.
bool intersects(const Ellipsoid& E1, const Ellipsoid& E2);

/// Minimum distance between the two boundary surfaces; 0 if the solids
/// intersect. Alternating projections between the two convex bodies.
double surface_distance(const Ellipsoid& E1, const Ellipsoid& E2);

/// Euclidean projection of p onto the solid ellipsoid (identity if inside).
Eigen::VectorXd project_onto(const Ellipsoid& E, const Eigen::VectorXd& p);

} // namespace collprob
