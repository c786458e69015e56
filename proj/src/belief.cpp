#include "collprob/belief.hpp"

#include <cmath>

#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"
#include "collprob/rng.hpp"

namespace collprob {

Eigen::VectorXd GaussianBelief::flattened() const {
    const auto n = mean.size();
    Eigen::VectorXd s(n + n * n);
    s.head(n) = mean;
    for (Eigen::Index i = 0; i < n; ++i)
        s.segment(n + i * n, n) = cov.row(i);
    return s;
}

ModelPair point_mass_model(double dt, const Eigen::MatrixXd& R,
                           const Eigen::MatrixXd& Q) {
    const auto n = R.rows();
    ModelPair m;
    m.f = [dt](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        return Eigen::VectorXd(x + dt * u);
    };
    m.F = [n](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
    };
    m.R = R;
    m.h = [](const Eigen::VectorXd& x) { return x; };
    m.H = [n](const Eigen::VectorXd&) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
    };
    m.Q = Q;
    return m;
}

GaussianBelief ekf_predict(const GaussianBelief& belief, const Eigen::VectorXd& u,
                           const ModelPair& model) {
    GaussianBelief out;
    out.mean = model.f(belief.mean, u);
    const Eigen::MatrixXd F = model.F(belief.mean, u);
    if (!out.mean.allFinite() || !F.allFinite())
        throw NonFiniteDynamics("ekf_predict: motion model produced non-finite values");
    out.cov = symmetrize(F * belief.cov * F.transpose() + model.R);
    return out;
}

namespace {

Eigen::MatrixXd kalman_gain(const GaussianBelief& predicted, const ModelPair& model,
                            Eigen::MatrixXd* S_out) {
    const Eigen::MatrixXd H = model.H(predicted.mean);
    const Eigen::MatrixXd S = symmetrize(H * predicted.cov * H.transpose() + model.Q);
    if (sym_cond(S) > 1e12)
        throw SingularInnovationCovariance(
            "ekf_update: innovation covariance is numerically singular");
    if (S_out) *S_out = S;
    return predicted.cov * H.transpose() * S.ldlt().solve(
        Eigen::MatrixXd::Identity(S.rows(), S.cols()));
}

} // namespace

GaussianBelief ekf_update(const GaussianBelief& predicted, const Eigen::VectorXd& z,
                          const ModelPair& model) {
    const Eigen::MatrixXd H = model.H(predicted.mean);
    const Eigen::MatrixXd K = kalman_gain(predicted, model, nullptr);
    GaussianBelief out;
    out.mean = predicted.mean + K * (z - model.h(predicted.mean));
    // Joseph form keeps the covariance PSD under roundoff
    const Eigen::MatrixXd IKH =
        Eigen::MatrixXd::Identity(predicted.cov.rows(), predicted.cov.cols()) - K * H;
    out.cov = symmetrize(IKH * predicted.cov * IKH.transpose() +
                         K * model.Q * K.transpose());
    return out;
}

Eigen::MatrixXd innovation_covariance(const GaussianBelief& predicted,
                                      const ModelPair& model) {
    const Eigen::MatrixXd H = model.H(predicted.mean);
    return symmetrize(H * predicted.cov * H.transpose() + model.Q);
}

GaussianBelief propagate_ml(const GaussianBelief& belief, const Eigen::VectorXd& u,
                            const ModelPair& model) {
    const GaussianBelief predicted = ekf_predict(belief, u, model);
    return ekf_update(predicted, model.h(predicted.mean), model);
}

GaussianBelief sample_belief_transition(const GaussianBelief& belief,
                                        const Eigen::VectorXd& u,
                                        const ModelPair& model, std::uint64_t seed) {
    const GaussianBelief predicted = ekf_predict(belief, u, model);
    Eigen::MatrixXd S;
    const Eigen::MatrixXd K = kalman_gain(predicted, model, &S);
    const Eigen::MatrixXd L = sym_sqrt(S);
    Rng rng(seed);
    Eigen::VectorXd w(S.rows());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
    GaussianBelief out = ekf_update(predicted, model.h(predicted.mean), model);
    out.mean = predicted.mean + K * (L * w);
    return out;
}

} // namespace collprob
