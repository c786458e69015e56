#include "collprob/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "collprob/errors.hpp"
#include "collprob/linalg.hpp"

namespace collprob {

QuadFormSpec standardize(const Eigen::MatrixXd& A,
                         const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& Sigma) {
    if (!is_symmetric(A, 1e-10))
        throw NonSymmetricA("standardize: A is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sig_es(symmetrize(Sigma));
    if (sig_es.eigenvalues().minCoeff() <= 1e-12 * std::max(0.0, sig_es.eigenvalues().maxCoeff()))
        throw SingularSigma("standardize: Sigma is singular or not positive definite");

    const Eigen::VectorXd root = sig_es.eigenvalues().cwiseSqrt();
    const Eigen::MatrixXd S_half = sig_es.eigenvectors() * root.asDiagonal() *
                                   sig_es.eigenvectors().transpose();
    const Eigen::MatrixXd S_inv_half = sig_es.eigenvectors() *
                                       root.cwiseInverse().asDiagonal() *
                                       sig_es.eigenvectors().transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(S_half * A * S_half));

    const auto n = mu.size();
    QuadFormSpec spec;
    spec.n = static_cast<int>(n);
    spec.lambdas.resize(n);
    spec.b.resize(n);
    Eigen::VectorXd b_asc = es.eigenvectors().transpose() * (S_inv_half * mu);
    for (Eigen::Index i = 0; i < n; ++i) {
        spec.lambdas(i) = es.eigenvalues()(n - 1 - i);  // descending
        spec.b(i) = b_asc(n - 1 - i);
    }
    return spec;
}

namespace {

// Shared evaluator for the cdf/pdf series; the two differ only in the power
// of v and the Gamma argument.
SeriesResult eval_series(const QuadFormSpec& spec, double v, double tol,
                         int k_max, double exp_offset, double gamma_offset,
                         bool is_cdf) {
    if (spec.lambdas.minCoeff() <= 0.0)
        throw Error("quadform series: eigenvalues must all be positive");
    if (v < 0.0)
        throw Error("quadform series: v must be non-negative");

    SeriesResult res;
    if (v == 0.0) {
        res.value = 0.0;
        res.terms_used = 0;
        res.converged = true;
        return res;
    }

    const int n = spec.n;
    const double log_v = std::log(v);
    double log_c0 = 0.0;
    for (int i = 0; i < n; ++i)
        log_c0 += -0.5 * spec.b(i) * spec.b(i) - 0.5 * std::log(2.0 * spec.lambdas(i));

    std::vector<double> c{std::exp(log_c0)};
    std::vector<double> d{0.0};  // d_0 unused
    double sum = 0.0;
    int consecutive_small = 0;
    double sign = 1.0;

    for (int k = 0; k < k_max; ++k) {
        if (k > 0) {
            // d_k = 1/2 sum_i (1 - k b_i^2) (2 lambda_i)^{-k}
            double dk = 0.0;
            for (int i = 0; i < n; ++i)
                dk += 0.5 * (1.0 - k * spec.b(i) * spec.b(i)) *
                      std::pow(2.0 * spec.lambdas(i), -static_cast<double>(k));
            d.push_back(dk);
            double ck = 0.0;
            for (int i = 0; i < k; ++i) ck += d[k - i] * c[i];
            c.push_back(ck / k);
        }
        if (!std::isfinite(c[k]) || std::abs(c[k]) > 1e290) {
            res.terms_used = k;
            res.converged = false;
            break;
        }
        double log_mag = (0.5 * n + k + exp_offset) * log_v -
                         std::lgamma(0.5 * n + k + gamma_offset);
        if (log_mag > 700.0) {
            res.terms_used = k;
            res.converged = false;
            break;
        }
        double term = sign * c[k] * std::exp(log_mag);
        sign = -sign;
        sum += term;
        res.terms_used = k + 1;
        res.last_term_magnitude = std::abs(term);
        if (!std::isfinite(sum)) {
            res.converged = false;
            break;
        }
        if (std::abs(term) <= tol * std::max(1e-300, std::abs(sum))) {
            if (++consecutive_small >= 2) {
                res.converged = true;
                break;
            }
        } else {
            consecutive_small = 0;
        }
    }
    res.value = is_cdf ? std::clamp(sum, 0.0, 1.0) : std::max(sum, 0.0);
    return res;
}

} // namespace

SeriesResult cdf_series(const QuadFormSpec& spec, double v, double tol, int k_max) {
    return eval_series(spec, v, tol, k_max, 0.0, 1.0, true);
}

SeriesResult pdf_series(const QuadFormSpec& spec, double v, double tol, int k_max) {
    return eval_series(spec, v, tol, k_max, -1.0, 0.0, false);
}

std::optional<std::pair<int, double>> chi_square_case(const Eigen::MatrixXd& A,
                                                      const Eigen::VectorXd& mu,
                                                      const Eigen::MatrixXd& Sigma,
                                                      double tol) {
    if (!is_symmetric(A, 1e-10))
        throw NonSymmetricA("chi_square_case: A is not symmetric");
    const double trace = (A * Sigma).trace();
    const int r = static_cast<int>(std::lround(trace));
    if (r < 1 || std::abs(trace - r) > tol) return std::nullopt;
    const Eigen::MatrixXd ASA = A * Sigma * A;
    if ((ASA - A).norm() > tol * A.norm()) return std::nullopt;
    return std::make_pair(r, std::max(0.0, mu.dot(A * mu)));
}

double noncentral_chi2_cdf(int r, double delta2, double v) {
    if (r < 1) throw Error("noncentral_chi2_cdf: r must be a positive integer");
    if (delta2 < 0.0) throw Error("noncentral_chi2_cdf: delta2 must be non-negative");
    if (v <= 0.0) return 0.0;
    if (delta2 == 0.0) return boost::math::gamma_p(0.5 * r, 0.5 * v);

    const double rate = 0.5 * delta2;
    const double log_rate = std::log(rate);
    double sum = 0.0;
    double cum_weight = 0.0;
    for (int j = 0;; ++j) {
        double log_w = -rate + j * log_rate - std::lgamma(j + 1.0);
        double w = std::exp(log_w);
        cum_weight += w;
        if (w > 0.0)
            sum += w * boost::math::gamma_p(0.5 * r + j, 0.5 * v);
        if (1.0 - cum_weight < 1e-12 && j >= rate) break;
        if (j > 100000) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace collprob
