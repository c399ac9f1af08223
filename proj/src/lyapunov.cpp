#include "trimap/lyapunov.hpp"

#include "trimap/classical_dynamics.hpp"
#include "trimap/errors.hpp"
#include "trimap/parallel.hpp"
#include "trimap/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace trimap {

namespace {

void require_rounded(const MapParams& params) {
    params.validate();
    if (params.r <= 0.0) throw InvalidArgument("this estimate requires r > 0");
}

} // namespace

double lyapunov_numerical(const MapParams& params, int steps, std::size_t n_traj, std::uint64_t seed,
                          unsigned threads) {
    params.validate();
    if (params.r == 0.0)
        throw InvalidArgument("numerical Lyapunov rate is undefined at r = 0 (the exponent is 0)");
    if (steps <= 0 || n_traj == 0) throw InvalidArgument("need steps > 0 and n_traj > 0");

    std::vector<double> rates(n_traj);
    parallel_for(n_traj, threads, [&](std::size_t i) {
        SplitMix64 g(derive_seed(seed, i));
        PhasePoint pt{g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0)};
        const double theta = g.uniform(0.0, 2.0 * std::numbers::pi);
        double dx = std::cos(theta);
        double dp = std::sin(theta);
        double acc = 0.0;
        for (int n = 0; n < steps; ++n) {
            const auto m = tangent_matrix(pt.x, params);
            const double nx = m[0] * dx + m[1] * dp;
            const double np = m[2] * dx + m[3] * dp;
            const double norm = std::hypot(nx, np);
            acc += std::log(norm);
            dx = nx / norm;
            dp = np / norm;
            pt = map_step(pt, params);
        }
        rates[i] = acc / steps;
    });

    double sum = 0.0;
    for (double v : rates) sum += v;
    return sum / static_cast<double>(n_traj);
}

double lyapunov_series(const MapParams& params, double tol) {
    require_rounded(params);
    const double r = params.r;
    const double c = std::numbers::sqrt2 * std::abs(params.alpha) / r;
    const double q = 1.0 - std::numbers::sqrt2 * r;

    // Tail after n terms, using ln(c tau) <= ln(c n) + (tau - n)/n:
    //   q^n [ ln(c n) / (1 - q) + 1 / (n (1 - q)^2) ].
    const double one_minus_q = 1.0 - q;
    double sum = 0.0;
    double weight = 1.0; // q^(tau - 1)
    for (long tau = 1;; ++tau) {
        sum += weight * std::log(c * static_cast<double>(tau));
        weight *= q;
        const double n = static_cast<double>(tau);
        const double tail =
            weight * (std::max(std::log(c * n), 0.0) / one_minus_q + 1.0 / (n * one_minus_q * one_minus_q));
        if (tail < tol * std::abs(sum) || weight == 0.0) break;
    }
    return 2.0 * r * r * sum;
}

double lyapunov_simple(const MapParams& params) {
    require_rounded(params);
    const double r = params.r;
    return std::numbers::sqrt2 * r * std::log(std::abs(params.alpha) / (r * r));
}

double lyapunov_local_max(const MapParams& params) {
    require_rounded(params);
    return std::log(std::numbers::sqrt2 * std::abs(params.alpha) / params.r);
}

double lyapunov_star(const MapParams& params) {
    return lyapunov_local_max(params) + 0.5 * std::log(std::numbers::sqrt2 * params.r);
}

LyapunovEstimates estimate_all(const MapParams& params, int steps, std::size_t n_traj, std::uint64_t seed,
                               unsigned threads) {
    return LyapunovEstimates{lyapunov_numerical(params, steps, n_traj, seed, threads), lyapunov_series(params),
                             lyapunov_simple(params), lyapunov_local_max(params), lyapunov_star(params)};
}

double max_eigenvalue_product_identity(std::span<const std::pair<double, double>> factors) {
    if (factors.empty()) throw InvalidArgument("factor list must be nonempty");
    double prod = 1.0;
    for (const auto& [a, b] : factors) prod *= a + b;
    return prod;
}

} // namespace trimap
