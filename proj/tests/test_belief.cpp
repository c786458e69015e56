#include <doctest.h>

#include <cmath>

#include "collprob/belief.hpp"
#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"
#include "collprob/rng.hpp"

using namespace collprob;

namespace {

Eigen::MatrixXd random_spd(Rng& rng, int n, double ridge) {
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = rng.normal();
    return M * M.transpose() + ridge * Eigen::MatrixXd::Identity(n, n);
}

ModelPair random_linear_model(Rng& rng, int n) {
    Eigen::MatrixXd F(n, n), H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            F(i, j) = 0.5 * rng.normal() + (i == j ? 1.0 : 0.0);
            H(i, j) = 0.5 * rng.normal() + (i == j ? 1.0 : 0.0);
        }
    ModelPair m;
    m.f = [F](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return Eigen::VectorXd(F * x + u);
    };
    m.F = [F](const Eigen::VectorXd&, const Eigen::VectorXd&) { return F; };
    m.R = random_spd(rng, n, 0.05);
    m.h = [H](const Eigen::VectorXd& x) { return Eigen::VectorXd(H * x); };
    m.H = [H](const Eigen::VectorXd&) { return H; };
    m.Q = random_spd(rng, n, 0.05);
    return m;
}

ModelPair scalar_model(double q) {
    Eigen::MatrixXd Q(1, 1);
    Q << q;
    ModelPair m = point_mass_model(1.0, Eigen::MatrixXd::Zero(1, 1), Q);
    m.f = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return Eigen::VectorXd(x + u);
    };
    return m;
}

} // namespace

TEST_CASE("flattened view") {
    GaussianBelief b;
    b.mean = Eigen::Vector2d(1.0, 2.0);
    b.cov.resize(2, 2);
    b.cov << 3.0, 4.0, 4.0, 5.0;
    Eigen::VectorXd s = b.flattened();
    REQUIRE(s.size() == 6);
    CHECK(s(0) == 1.0);
    CHECK(s(2) == 3.0);
    CHECK(s(3) == 4.0);
    CHECK(s(5) == 5.0);
}

TEST_CASE("ekf_predict basics") {
    ModelPair m = point_mass_model(1.0, Eigen::MatrixXd::Zero(2, 2),
                                   Eigen::MatrixXd::Identity(2, 2));
    GaussianBelief b{Eigen::Vector2d(1.0, 2.0),
                     Eigen::Matrix2d::Identity()};
    GaussianBelief p = ekf_predict(b, Eigen::Vector2d::Zero(), m);
    CHECK((p.mean - b.mean).norm() == 0.0);
    CHECK((p.cov - b.cov).norm() == 0.0);

    ModelPair s = scalar_model(1.0);
    s.R.resize(1, 1);
    s.R << 0.5;
    GaussianBelief sb{Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1)};
    Eigen::VectorXd u(1);
    u << 2.0;
    GaussianBelief sp = ekf_predict(sb, u, s);
    CHECK(sp.mean(0) == doctest::Approx(3.0));
    CHECK(sp.cov(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("ekf_predict rejects non-finite dynamics") {
    ModelPair m = point_mass_model(1.0, Eigen::MatrixXd::Zero(1, 1),
                                   Eigen::MatrixXd::Identity(1, 1));
    m.f = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
        return Eigen::VectorXd(x * std::numeric_limits<double>::infinity());
    };
    GaussianBelief b{Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1)};
    CHECK_THROWS_AS(ekf_predict(b, Eigen::VectorXd::Zero(1), m),
                    NonFiniteDynamics);
}

TEST_CASE("ekf_update scalar algebra") {
    ModelPair m = scalar_model(1.0);
    GaussianBelief pred{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)};
    Eigen::VectorXd z(1);
    z << 2.0;
    GaussianBelief post = ekf_update(pred, z, m);
    CHECK(post.mean(0) == doctest::Approx(1.0));
    CHECK(post.cov(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("uninformative measurement leaves belief unchanged") {
    ModelPair m = scalar_model(1e12);
    GaussianBelief pred{Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1)};
    Eigen::VectorXd z(1);
    z << 100.0;
    GaussianBelief post = ekf_update(pred, z, m);
    CHECK(post.mean(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(post.cov(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("singular innovation covariance raises") {
    ModelPair m = scalar_model(0.0);
    m.H = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(1, 1); };
    GaussianBelief pred{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)};
    CHECK_THROWS_AS(ekf_update(pred, Eigen::VectorXd::Zero(1), m),
                    SingularInnovationCovariance);
}

TEST_CASE("linear-Gaussian exactness against closed-form Kalman") {
    Rng rng(201);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3;
        ModelPair m = random_linear_model(rng, n);
        const Eigen::MatrixXd F = m.F(Eigen::VectorXd::Zero(n), {});
        const Eigen::MatrixXd H = m.H(Eigen::VectorXd::Zero(n));
        GaussianBelief b{Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()),
                         random_spd(rng, n, 0.2)};
        Eigen::MatrixXd P = b.cov;
        Eigen::VectorXd mu = b.mean;
        for (int k = 0; k < 5; ++k) {
            Eigen::Vector3d u(rng.normal(), rng.normal(), rng.normal());
            Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
            b = ekf_update(ekf_predict(b, u, m), z, m);

            // closed-form Kalman recursion
            mu = F * mu + u;
            P = F * P * F.transpose() + m.R;
            Eigen::MatrixXd S = H * P * H.transpose() + m.Q;
            Eigen::MatrixXd K = P * H.transpose() * S.inverse();
            mu = mu + K * (z - H * mu);
            P = (Eigen::MatrixXd::Identity(n, n) - K * H) * P;

            CHECK((b.mean - mu).norm() <= 1e-12 * std::max(1.0, mu.norm()));
            CHECK((b.cov - P).norm() <= 1e-10 * std::max(1.0, P.norm()));
        }
    }
}

TEST_CASE("ekf_update matches the information-filter form") {
    Rng rng(211);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3;
        ModelPair m = random_linear_model(rng, n);
        const Eigen::MatrixXd H = m.H(Eigen::VectorXd::Zero(n));
        GaussianBelief pred{
            Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()),
            random_spd(rng, n, 0.2)};
        Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
        GaussianBelief post = ekf_update(pred, z, m);

        const Eigen::MatrixXd info =
            pred.cov.inverse() + H.transpose() * m.Q.inverse() * H;
        const Eigen::MatrixXd P = info.inverse();
        const Eigen::VectorXd mu =
            P * (pred.cov.inverse() * pred.mean +
                 H.transpose() * m.Q.inverse() * z);
        CHECK((post.cov - P).norm() <= 1e-9 * std::max(1.0, P.norm()));
        CHECK((post.mean - mu).norm() <= 1e-9 * std::max(1.0, mu.norm()));
    }
}

TEST_CASE("covariance never increases in the update") {
    Rng rng(223);
    for (int trial = 0; trial < 30; ++trial) {
        ModelPair m = random_linear_model(rng, 3);
        GaussianBelief pred{Eigen::Vector3d::Zero(), random_spd(rng, 3, 0.2)};
        GaussianBelief post =
            ekf_update(pred, Eigen::Vector3d(rng.normal(), rng.normal(),
                                             rng.normal()),
                       m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pred.cov - post.cov);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        CHECK(is_symmetric(post.cov, 1e-12));
    }
}

TEST_CASE("innovation covariance") {
    ModelPair m = point_mass_model(1.0, Eigen::MatrixXd::Zero(2, 2),
                                   Eigen::MatrixXd::Zero(2, 2));
    GaussianBelief pred{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()};
    CHECK((innovation_covariance(pred, m) - pred.cov).norm() == 0.0);

    m.H = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(2, 2); };
    m.Q = 0.7 * Eigen::MatrixXd::Identity(2, 2);
    CHECK((innovation_covariance(pred, m) - m.Q).norm() == 0.0);

    // MC check: covariance of z - h(mu_bar) with z = H x + v, x ~ pred
    Rng rng(227);
    ModelPair lm = random_linear_model(rng, 2);
    GaussianBelief p2{Eigen::Vector2d(0.3, -0.2), random_spd(rng, 2, 0.2)};
    const Eigen::MatrixXd H = lm.H(p2.mean);
    const Eigen::MatrixXd Lx = sym_sqrt(p2.cov);
    const Eigen::MatrixXd Lv = sym_sqrt(lm.Q);
    const int N = 100000;
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    Rng mc(3001);
    for (int i = 0; i < N; ++i) {
        Eigen::Vector2d x =
            p2.mean + Lx * Eigen::Vector2d(mc.normal(), mc.normal());
        Eigen::Vector2d v = Lv * Eigen::Vector2d(mc.normal(), mc.normal());
        Eigen::Vector2d innov = H * x + v - H * p2.mean;
        acc += innov * innov.transpose();
    }
    acc /= N;
    const Eigen::MatrixXd S = innovation_covariance(p2, lm);
    // entrywise 4-stderr band (stderr ~ sqrt(2/N) per unit variance scale)
    const double tol = 4.0 * std::sqrt(2.0 / N) * S.norm();
    CHECK((acc - S).norm() <= tol + 0.01 * S.norm());
}

TEST_CASE("propagate_ml equals zero-innovation update") {
    Rng rng(229);
    ModelPair m = random_linear_model(rng, 3);
    GaussianBelief b{Eigen::Vector3d(0.1, 0.2, -0.3), random_spd(rng, 3, 0.2)};
    Eigen::Vector3d u(0.5, -0.1, 0.2);
    GaussianBelief pred = ekf_predict(b, u, m);
    GaussianBelief ml = propagate_ml(b, u, m);
    CHECK((ml.mean - pred.mean).norm() < 1e-12);
    GaussianBelief upd = ekf_update(pred, m.h(pred.mean) , m);
    CHECK((ml.cov - upd.cov).norm() < 1e-12);

    // covariance independent of z
    GaussianBelief other =
        ekf_update(pred, Eigen::Vector3d(9.0, -3.0, 1.0), m);
    CHECK((ml.cov - other.cov).norm() < 1e-12);
}

TEST_CASE("sample_belief_transition statistics") {
    Rng rng(233);
    ModelPair m = random_linear_model(rng, 2);
    GaussianBelief b{Eigen::Vector2d(0.4, -0.6), random_spd(rng, 2, 0.3)};
    const Eigen::Vector2d u(0.2, 0.1);
    GaussianBelief ml = propagate_ml(b, u, m);

    const GaussianBelief pred = ekf_predict(b, u, m);
    const Eigen::MatrixXd H = m.H(pred.mean);
    const Eigen::MatrixXd S = H * pred.cov * H.transpose() + m.Q;
    const Eigen::MatrixXd K =
        pred.cov * H.transpose() * S.inverse();
    const Eigen::MatrixXd mean_cov = K * S * K.transpose();

    const int N = 50000;
    Eigen::Vector2d mean_acc = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov_acc = Eigen::Matrix2d::Zero();
    for (int i = 0; i < N; ++i) {
        GaussianBelief s = sample_belief_transition(b, u, m, 77770 + i);
        CHECK((s.cov - ml.cov).norm() < 1e-12);
        mean_acc += s.mean;
        cov_acc += (s.mean - ml.mean) * (s.mean - ml.mean).transpose();
    }
    mean_acc /= N;
    cov_acc /= N;
    const double se = std::sqrt(mean_cov.trace() / N);
    CHECK((mean_acc - ml.mean).norm() <= 4.0 * se);
    CHECK((cov_acc - mean_cov).norm() <=
          4.0 * std::sqrt(2.0 / N) * mean_cov.norm() + 0.02 * mean_cov.norm());
}
