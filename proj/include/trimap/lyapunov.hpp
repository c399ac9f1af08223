#pragma once

#include "trimap/potential.hpp"

#include <cstdint>
#include <span>
#include <utility>

namespace trimap {

// Per-step Lyapunov rates for one set of map parameters. Every closed form uses
// |alpha| inside its logarithm.
struct LyapunovEstimates {
    double lambda_numerical;
    double lambda_series;
    double lambda_simple;
    double lambda_max;
    double lambda_star;
};

// Benettin estimate: the tangent vector is renormalized to unit length every
// step and the log growth accumulated; result is the mean over n_traj orbits of
// (1/T) * sum of logs. Throws InvalidArgument for r = 0.
double lyapunov_numerical(const MapParams& params, int steps, std::size_t n_traj, std::uint64_t seed,
                          unsigned threads = 1);

// 2 r^2 * sum_{tau >= 1} (1 - sqrt(2) r)^(tau - 1) ln(sqrt(2) |alpha| tau / r),
// summed until a bound on the remaining tail drops below tol * partial sum.
double lyapunov_series(const MapParams& params, double tol = 1e-12);

// sqrt(2) r ln(|alpha| / r^2): the series with tau replaced by its mean.
double lyapunov_simple(const MapParams& params);

// ln(sqrt(2) |alpha| / r), the largest local exponent inside E.
double lyapunov_local_max(const MapParams& params);

// lambda_max + ln(sqrt(2) r) / 2, the rate that dominates the log of the
// ensemble-averaged squared Jacobian.
double lyapunov_star(const MapParams& params);

LyapunovEstimates estimate_all(const MapParams& params, int steps, std::size_t n_traj, std::uint64_t seed,
                               unsigned threads = 1);

// Largest eigenvalue of prod_k [[a_k, b_k], [a_k, b_k]], which is prod_k (a_k + b_k).
double max_eigenvalue_product_identity(std::span<const std::pair<double, double>> factors);

} // namespace trimap
