#include "collprob/geometry.hpp"

#include <cmath>
#include <limits>

#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"

namespace collprob {

Ellipsoid::Ellipsoid()
    : shape(Eigen::MatrixXd::Identity(3, 3)),
      center(Eigen::VectorXd::Zero(3)),
      max_axis_(1.0),
      min_axis_(1.0) {}

Ellipsoid::Ellipsoid(Eigen::MatrixXd shape_in, Eigen::VectorXd center_in)
    : shape(std::move(shape_in)), center(std::move(center_in)) {
    const auto n = center.size();
    if (n != 2 && n != 3)
        throw InvalidEllipsoid("Ellipsoid: dimension must be 2 or 3, got " + std::to_string(n));
    if (shape.rows() != n || shape.cols() != n)
        throw InvalidEllipsoid("Ellipsoid: shape matrix does not match center dimension");
    if (!is_symmetric(shape, 1e-12))
        throw InvalidEllipsoid("Ellipsoid: shape matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(shape));
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw InvalidEllipsoid("Ellipsoid: shape matrix is not positive definite");
    // semi-axis a_i = 1/sqrt(w_i)
    max_axis_ = 1.0 / std::sqrt(es.eigenvalues().minCoeff());
    min_axis_ = 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
}

Eigen::VectorXd Ellipsoid::semi_axes() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape);
    Eigen::VectorXd a(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a(i) = 1.0 / std::sqrt(es.eigenvalues()(a.size() - 1 - i));
    return a;
}

double Ellipsoid::volume() const {
    const double pi = 3.14159265358979323846;
    double prod = 1.0 / std::sqrt(shape.determinant());
    return dim() == 2 ? pi * prod : 4.0 / 3.0 * pi * prod;
}

Ellipsoid Ellipsoid::at(const Eigen::VectorXd& new_center) const {
    Ellipsoid e = *this;
    e.center = new_center;
    return e;
}

Ellipsoid make_ellipsoid(const Eigen::VectorXd& semi_axes,
                         const Eigen::MatrixXd& rotation,
                         const Eigen::VectorXd& center) {
    const auto n = semi_axes.size();
    if (semi_axes.minCoeff() <= 0.0)
        throw NonPositiveAxis("make_ellipsoid: semi-axes must be positive");
    Eigen::MatrixXd rtr = rotation.transpose() * rotation;
    if ((rtr - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw NonOrthonormalRotation("make_ellipsoid: rotation is not orthonormal");
    Eigen::VectorXd inv_sq = semi_axes.array().square().inverse();
    Eigen::MatrixXd shape = rotation * inv_sq.asDiagonal() * rotation.transpose();
    return Ellipsoid(symmetrize(shape), center);
}

ContactResult contact_point(const Ellipsoid& E1, const Ellipsoid& E2) {
    const int n = E1.dim();
    if (n != E2.dim())
        throw InvalidEllipsoid("contact_point: dimension mismatch");
    const Eigen::MatrixXd& B = E1.shape;
    const Eigen::MatrixXd& C = E2.shape;
    const Eigen::VectorXd y = E2.center - E1.center;
    if (y.cwiseAbs().maxCoeff() <= 1e-12)
        throw CoincidentCenters("contact_point: ellipsoid centers coincide");

    Eigen::MatrixXd B_half, B_inv_half;
    sym_sqrt_pair(B, B_half, B_inv_half);
    const Eigen::MatrixXd C_bar = symmetrize(B_inv_half * C * B_inv_half);
    const Eigen::VectorXd c_bar = B_half * y;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ces(C_bar);
    Eigen::VectorXd cw = ces.eigenvalues();
    const double floor = 1e-14 * std::max(1e-300, cw.maxCoeff());
    for (Eigen::Index i = 0; i < cw.size(); ++i) cw(i) = std::max(cw(i), floor);
    const Eigen::MatrixXd C_tilde = ces.eigenvectors() *
        cw.cwiseInverse().asDiagonal() * ces.eigenvectors().transpose();
    const Eigen::VectorXd c_tilde = ces.eigenvectors() *
        cw.array().rsqrt().matrix().asDiagonal() *
        (ces.eigenvectors().transpose() * c_bar);

    Eigen::MatrixXd M(2 * n, 2 * n);
    M.topLeftCorner(n, n) = C_tilde;
    M.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    M.bottomLeftCorner(n, n) = -c_tilde * c_tilde.transpose();
    M.bottomRightCorner(n, n) = C_tilde;

    Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
    double lambda0 = std::numeric_limits<double>::infinity();
    bool found = false;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const auto ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) <= 1e-9 * std::max(1.0, std::abs(ev.real()))) {
            found = true;
            lambda0 = std::min(lambda0, ev.real());
        }
    }
    if (!found)
        throw ComplexMinimalEigenvalue("contact_point: no real eigenvalue in the pencil");

    Eigen::MatrixXd shift = lambda0 * Eigen::MatrixXd::Identity(n, n) - C_tilde;
    if (sym_cond(shift) > 1e12)
        throw SingularShift("contact_point: lambda0*I - C_tilde is numerically singular");
    Eigen::MatrixXd shift_inv = shift.inverse();

    ContactResult res;
    res.lambda0 = lambda0;
    res.threshold = 1.0 / (lambda0 * lambda0);
    res.x_star = E1.center + lambda0 * (B_inv_half * (shift_inv * c_bar));
    Eigen::MatrixXd D = B_inv_half * shift_inv * B_half;
    res.collision_matrix = symmetrize(D.transpose() * B * D);
    return res;
}

bool intersects(const Ellipsoid& E1, const Ellipsoid& E2) {
    const double dist = (E2.center - E1.center).norm();
    if (dist <= 1e-12) return true;
    // enclosing/inscribed sphere shortcuts; exact, just cheaper
    if (dist > E1.max_semi_axis() + E2.max_semi_axis()) return false;
    if (dist < E1.min_semi_axis() + E2.min_semi_axis()) return true;
    ContactResult c = contact_point(E1, E2);
    const Eigen::VectorXd y = E2.center - E1.center;
    return y.dot(c.collision_matrix * y) <= c.threshold;
}

Eigen::VectorXd project_onto(const Ellipsoid& E, const Eigen::VectorXd& p) {
    Eigen::VectorXd q = p - E.center;
    if (q.dot(E.shape * q) <= 1.0) return p;
    // Work in the eigenbasis of the shape: minimize |u - q|^2 on u^T W u = 1,
    // u_i = q_i / (1 + t w_i); Newton on the multiplier t.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E.shape);
    const Eigen::VectorXd w = es.eigenvalues();
    const Eigen::VectorXd qe = es.eigenvectors().transpose() * q;
    double t = 0.0;
    for (int it = 0; it < 100; ++it) {
        double h = -1.0, dh = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            double den = 1.0 + t * w(i);
            double ui = qe(i) / den;
            h += w(i) * ui * ui;
            dh += -2.0 * w(i) * w(i) * qe(i) * qe(i) / (den * den * den);
        }
        if (std::abs(h) < 1e-14) break;
        double step = h / dh;
        t -= step;
        if (t < 0.0) t = 0.0;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    Eigen::VectorXd u(qe.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = qe(i) / (1.0 + t * w(i));
    return E.center + es.eigenvectors() * u;
}

double surface_distance(const Ellipsoid& E1, const Ellipsoid& E2) {
    if (intersects(E1, E2)) return 0.0;
    Eigen::VectorXd p = E1.center;
    Eigen::VectorXd q = E2.center;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        q = project_onto(E2, p);
        p = project_onto(E1, q);
        double d = (p - q).norm();
        if (prev - d < 1e-12) break;
        prev = d;
    }
    return (p - q).norm();
}

} // namespace collprob
