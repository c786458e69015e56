#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "collprob/geometry.hpp"

namespace collprob {

struct McEstimate {
    double probability = 0.0;
    double std_error = 0.0;  ///< binomial sqrt(p(1-p)/N)
    long long samples = 0;
    std::uint64_t seed = 0;
};

/// Number of samples per deterministic RNG chunk; chunk i draws from the
/// stream seeded with seed + i, and chunk results are reduced in index
/// order, so the estimate is independent of scheduling.
inline constexpr long long mc_chunk_size = 1 << 16;

/// Monte Carlo estimate of the collision probability between two ellipsoids
/// whose centers are Gaussian.
///
/// Sampling both centers independently is equivalent to sampling the center
/// offset y ~ N(mu_c - mu_b, Sigma_robot + Sigma_obstacle); we sample y
/// directly and evaluate the deterministic intersection test as indicator.
/// Samples on which the geometry raises are counted as indeterminate; a
/// fraction above 1e-4 raises OracleDegenerate.
McEstimate mc_collision_probability(const Ellipsoid& robot,
                                    const Ellipsoid& obstacle,
                                    const Eigen::MatrixXd& Sigma_robot,
                                    const Eigen::MatrixXd& Sigma_obstacle,
                                    long long samples, std::uint64_t seed);

} // namespace collprob
