#include "trimap/classical_dynamics.hpp"
#include "trimap/errors.hpp"
#include "trimap/lyapunov.hpp"
#include "trimap/rng.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

using namespace trimap;

namespace {

MapParams with_r(double r) {
    MapParams p;
    p.r = r;
    return p;
}

// Direct partial sum with compensated accumulation.
double brute_series(double r, double alpha, long terms) {
    const double q = 1.0 - std::numbers::sqrt2 * r;
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double qp = 1.0L;
    for (long tau = 1; tau <= terms; ++tau) {
        const long double term = qp * std::log(std::numbers::sqrt2 * std::abs(alpha) * static_cast<double>(tau) / r);
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        qp *= q;
    }
    return static_cast<double>(2.0L * r * r * sum);
}

} // namespace

TEST_CASE("closed forms") {
    CHECK(lyapunov_simple(with_r(0.1)) == doctest::Approx(0.6581864).epsilon(1e-6));
    CHECK(lyapunov_simple(with_r(0.01)) == doctest::Approx(0.1309460).epsilon(1e-6));
    CHECK(lyapunov_local_max(with_r(0.1)) == doctest::Approx(2.6981).epsilon(1e-4));
    CHECK(lyapunov_local_max(with_r(0.01)) == doctest::Approx(5.0007).epsilon(1e-4));
    CHECK(lyapunov_star(with_r(0.1)) == doctest::Approx(1.7201).epsilon(1e-4));
    CHECK(lyapunov_star(with_r(0.01)) == doctest::Approx(2.8714).epsilon(1e-4));
    for (double r : {0.3, 0.1, 0.02, 1e-3}) {
        const auto p = with_r(r);
        const double tau_bar = 1.0 / (std::numbers::sqrt2 * r);
        CHECK(lyapunov_simple(p) ==
              doctest::Approx(std::log(std::numbers::sqrt2 * std::abs(p.alpha) * tau_bar / r) / tau_bar).epsilon(1e-13));
    }
}

TEST_CASE("closed-form trends") {
    CHECK(lyapunov_local_max(with_r(0.05)) > lyapunov_local_max(with_r(0.1)));
    CHECK(lyapunov_local_max(with_r(1e-5)) > lyapunov_local_max(with_r(1e-4)));
    CHECK(lyapunov_star(with_r(1e-4)) > lyapunov_star(with_r(1e-2)));
    CHECK(lyapunov_star(with_r(1e-6)) > lyapunov_star(with_r(1e-4)));
    CHECK(lyapunov_series(with_r(1e-3)) < lyapunov_series(with_r(1e-2)));
    CHECK(lyapunov_series(with_r(1e-4)) < lyapunov_series(with_r(1e-3)));
    CHECK(lyapunov_series(with_r(1e-4)) > 0.0);
}

TEST_CASE("series against brute-force summation") {
    const auto p = with_r(0.1);
    const double ref = brute_series(0.1, p.alpha, 1000000);
    CHECK(std::abs(lyapunov_series(p) / ref - 1.0) < 1e-10);
    CHECK(lyapunov_series(with_r(0.2)) == doctest::Approx(0.83947).epsilon(1e-4));
    CHECK(lyapunov_series(with_r(0.0125)) == doctest::Approx(0.14627).epsilon(1e-4));
}

TEST_CASE("series within a factor two of the simple form") {
    for (double r = 1e-3; r <= 0.2 + 1e-12; r *= 1.25) {
        const double ratio = lyapunov_series(with_r(r)) / lyapunov_simple(with_r(r));
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
}

TEST_CASE("series below the local maximum") {
    for (double r : {0.5, 0.2, 0.1, 0.01, 1e-4}) CHECK(lyapunov_series(with_r(r)) < lyapunov_local_max(with_r(r)));
}

TEST_CASE("numerical estimate") {
    CHECK_THROWS_AS(lyapunov_numerical(with_r(0.0), 100, 2, 1), InvalidArgument);
    const double num = lyapunov_numerical(with_r(0.1), 100000, 50, 1);
    CHECK(std::abs(num / lyapunov_series(with_r(0.1)) - 1.0) < 0.15);

    const double a = lyapunov_numerical(with_r(0.2), 50000, 50, 101);
    const double b = lyapunov_numerical(with_r(0.2), 50000, 50, 202);
    CHECK(std::abs(a / b - 1.0) < 0.05);

    double prev = 1e300;
    for (double r : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
        const double v = lyapunov_numerical(with_r(r), 100000, 20, 7);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("numerical estimate is stable under doubling") {
    const auto p = with_r(0.1);
    const double base = lyapunov_numerical(p, 100000, 100, 9);
    CHECK(std::abs(lyapunov_numerical(p, 200000, 100, 9) / base - 1.0) < 0.05);
    CHECK(std::abs(lyapunov_numerical(p, 100000, 200, 9) / base - 1.0) < 0.05);
}

TEST_CASE("numerical estimate is thread-count independent") {
    const auto p = with_r(0.1);
    CHECK(lyapunov_numerical(p, 2000, 16, 5, 1) == lyapunov_numerical(p, 2000, 16, 5, 3));
}

TEST_CASE("rank-one product eigenvalue") {
    const std::vector<std::pair<double, double>> two{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(max_eigenvalue_product_identity(two) == 21.0);
    const std::vector<std::pair<double, double>> one{{2.5, 0.5}};
    CHECK(max_eigenvalue_product_identity(one) == 3.0);
    CHECK_THROWS_AS(max_eigenvalue_product_identity({}), InvalidArgument);

    SplitMix64 g(17);
    std::vector<std::pair<double, double>> f(10);
    Eigen::Matrix2d prod = Eigen::Matrix2d::Identity();
    for (auto& [a, b] : f) {
        a = g.uniform(0.1, 3.0);
        b = g.uniform(0.1, 3.0);
        Eigen::Matrix2d m;
        m << a, b, a, b;
        prod = m * prod;
    }
    const Eigen::Vector2cd ev = prod.eigenvalues();
    const double emax = std::max(std::abs(ev[0]), std::abs(ev[1]));
    CHECK(std::abs(max_eigenvalue_product_identity(f) / emax - 1.0) < 1e-9);
}

TEST_CASE("series equals the passage-product construction") {
    // Passages through E separated by geometric return times; each contributes a
    // rank-one factor with entries (a, a (tau - 1)), a = sqrt(2) |alpha| / r.
    for (double r : {0.1, 0.02}) {
        const auto p = with_r(r);
        const auto model = ReturnTimeModel::for_radius(r);
        const double a = std::numbers::sqrt2 * std::abs(p.alpha) / r;
        SplitMix64 g(31);
        constexpr int m0 = 20000;
        constexpr int chunk = 20;
        double log_emax = 0.0;
        double steps = 0.0;
        std::vector<std::pair<double, double>> block;
        for (int k = 0; k < m0; ++k) {
            const double u = 1.0 - g.uniform();
            const int tau = 1 + static_cast<int>(std::floor(std::log(u) / std::log(model.q_r)));
            block.emplace_back(a, a * (tau - 1));
            steps += tau;
            if (block.size() == chunk) {
                log_emax += std::log(max_eigenvalue_product_identity(block));
                block.clear();
            }
        }
        CHECK(std::abs(log_emax / steps / lyapunov_series(p) - 1.0) < 0.05);
    }
}

TEST_CASE("staying inside E for t steps has probability (sqrt2 r)^t") {
    // The product law treats successive kicks inside E as independent, which is
    // a small-r statement; at r = 0.2 the t >= 3 fractions already run high.
    const auto p = with_r(0.1);
    const double pr = std::numbers::sqrt2 * 0.1;
    constexpr int n = 2000000;
    constexpr int tmax = 4;
    std::vector<int> stay(tmax + 1, 0);
    SplitMix64 g(77);
    for (int i = 0; i < n; ++i) {
        PhasePoint pt{g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0)};
        for (int t = 1; t <= tmax; ++t) {
            if (classify_region(pt.x, p) == RegionTag::Outside) break;
            ++stay[t];
            pt = map_step(pt, p);
        }
    }
    for (int t = 1; t <= tmax; ++t) {
        const double prob = std::pow(pr, t);
        const double sigma = std::sqrt(n * prob * (1.0 - prob));
        CHECK_MESSAGE(std::abs(stay[t] - n * prob) < 4.0 * sigma, "t=" << t << " count=" << stay[t]);
    }
}
