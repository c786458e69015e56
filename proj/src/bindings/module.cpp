#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "collprob/assess.hpp"
#include "collprob/errors.hpp"
#include "collprob/baselines.hpp"
#include "collprob/geometry.hpp"
#include "collprob/mc.hpp"
#include "collprob/quadform.hpp"
#include "collprob/riskbounds.hpp"

namespace py = pybind11;
using namespace collprob;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Collision probabilities between Gaussian-uncertain ellipsoids";

    py::class_<Ellipsoid>(m, "Ellipsoid")
        .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("shape"),
             py::arg("center"))
        .def_readonly("shape", &Ellipsoid::shape)
        .def_readonly("center", &Ellipsoid::center)
        .def_property_readonly("semi_axes", &Ellipsoid::semi_axes)
        .def("volume", &Ellipsoid::volume)
        .def("at", &Ellipsoid::at, py::arg("center"))
        .def("__repr__", [](const Ellipsoid& e) {
            return "<Ellipsoid dim=" + std::to_string(e.dim()) + ">";
        });

    py::class_<ContactResult>(m, "ContactResult")
        .def_readonly("x_star", &ContactResult::x_star)
        .def_readonly("lambda0", &ContactResult::lambda0)
        .def_readonly("threshold", &ContactResult::threshold)
        .def_readonly("collision_matrix", &ContactResult::collision_matrix);

    py::class_<SeriesResult>(m, "SeriesResult")
        .def_readonly("value", &SeriesResult::value)
        .def_readonly("terms_used", &SeriesResult::terms_used)
        .def_readonly("converged", &SeriesResult::converged);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("probability", &McEstimate::probability)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("samples", &McEstimate::samples)
        .def_readonly("seed", &McEstimate::seed);

    py::class_<RiskAssessment>(m, "RiskAssessment")
        .def_property_readonly("method",
                               [](const RiskAssessment& a) {
                                   return std::string(to_string(a.method));
                               })
        .def_readonly("probability", &RiskAssessment::probability)
        .def_readonly("feasible", &RiskAssessment::feasible)
        .def_readonly("compute_time", &RiskAssessment::compute_time);

    m.def("make_ellipsoid", &make_ellipsoid, py::arg("semi_axes"),
          py::arg("rotation"), py::arg("center"));
    m.def("intersects", &intersects, py::arg("e1"), py::arg("e2"));
    m.def("contact_point", &contact_point, py::arg("e1"), py::arg("e2"));
    m.def("surface_distance", &surface_distance, py::arg("e1"), py::arg("e2"));
    m.def("project_onto", &project_onto, py::arg("ellipsoid"), py::arg("point"));

    m.def(
        "collision_probability",
        [](const Ellipsoid& robot, const Ellipsoid& obstacle,
           const Eigen::MatrixXd& sigma_robot, const Eigen::MatrixXd& sigma_obstacle,
           double tol) {
            const ContactResult c = contact_point(robot, obstacle);
            const Eigen::VectorXd mu = obstacle.center - robot.center;
            const QuadFormSpec spec = standardize(
                c.collision_matrix, mu, sigma_robot + sigma_obstacle);
            return cdf_series(spec, c.threshold, tol);
        },
        py::arg("robot"), py::arg("obstacle"), py::arg("sigma_robot"),
        py::arg("sigma_obstacle"), py::arg("tol") = 1e-10);

    m.def(
        "collision_upper_bound",
        [](const Ellipsoid& robot, const Ellipsoid& obstacle,
           const Eigen::MatrixXd& sigma_robot,
           const Eigen::MatrixXd& sigma_obstacle) {
            const ContactResult c = contact_point(robot, obstacle);
            const Eigen::VectorXd mu = obstacle.center - robot.center;
            return upper_bound(c.collision_matrix, mu,
                               sigma_robot + sigma_obstacle, c.threshold);
        },
        py::arg("robot"), py::arg("obstacle"), py::arg("sigma_robot"),
        py::arg("sigma_obstacle"));

    m.def("mc_collision_probability", &mc_collision_probability, py::arg("robot"),
          py::arg("obstacle"), py::arg("sigma_robot"), py::arg("sigma_obstacle"),
          py::arg("samples") = 1000000, py::arg("seed") = 0);

    m.def("bounding_volume_check", &bounding_volume_check, py::arg("robot"),
          py::arg("obstacle"), py::arg("sigma"), py::arg("n_sigma") = 3.0);
    m.def("center_point_probability", &center_point_probability, py::arg("robot"),
          py::arg("obstacle"), py::arg("sigma"));

    m.def("standardize", &standardize, py::arg("A"), py::arg("mu"),
          py::arg("sigma"));
    m.def(
        "cdf_series",
        [](const QuadFormSpec& spec, double v, double tol, int k_max) {
            return cdf_series(spec, v, tol, k_max);
        },
        py::arg("spec"), py::arg("v"), py::arg("tol") = 1e-10,
        py::arg("k_max") = 2000);
    m.def("noncentral_chi2_cdf", &noncentral_chi2_cdf, py::arg("r"),
          py::arg("delta2"), py::arg("v"));

    py::class_<QuadFormSpec>(m, "QuadFormSpec")
        .def_readonly("lambdas", &QuadFormSpec::lambdas)
        .def_readonly("b", &QuadFormSpec::b)
        .def_readonly("n", &QuadFormSpec::n);

    m.def(
        "assess_collision",
        [](const Ellipsoid& robot, const Ellipsoid& obstacle,
           const Eigen::MatrixXd& sigma_robot, const Eigen::MatrixXd& sigma_obstacle,
           const std::string& method, double eps, long long mc_samples,
           std::uint64_t seed, double tol) {
            AssessOptions opts;
            opts.eps = eps;
            opts.mc_samples = mc_samples;
            opts.seed = seed;
            opts.tol = tol;
            return assess_collision(robot, obstacle, sigma_robot, sigma_obstacle,
                                    risk_method_from_string(method), opts);
        },
        py::arg("robot"), py::arg("obstacle"), py::arg("sigma_robot"),
        py::arg("sigma_obstacle"), py::arg("method") = "exact",
        py::arg("eps") = 0.05, py::arg("mc_samples") = 1000000,
        py::arg("seed") = 0, py::arg("tol") = 1e-10);

    py::register_exception<Error>(m, "CollProbError");
}
