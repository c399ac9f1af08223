#include "trimap/analysis.hpp"
#include "trimap/classical_otoc.hpp"
#include "trimap/errors.hpp"
#include "trimap/logsum.hpp"
#include "trimap/lyapunov.hpp"

#include <doctest.h>

#include <algorithm>
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

double hbar_exp(int n) { return 1.0 / (std::numbers::pi * std::ldexp(1.0, n)); }

GaussianEnsembleSpec ensemble(std::size_t n, std::size_t m, double hbar_c, std::uint64_t seed, bool prefactor) {
    GaussianEnsembleSpec s;
    s.centers = draw_centers(n, seed);
    s.hbar_c = hbar_c;
    s.samples_per_center = m;
    s.seed = seed + 1;
    s.include_hbar_prefactor = prefactor;
    return s;
}

} // namespace

TEST_CASE("ensemble sampling moments") {
    GaussianEnsembleSpec s;
    s.centers = {{0.3, -0.2}};
    s.hbar_c = 1e-3;
    s.samples_per_center = 10000;
    s.seed = 5;
    const auto pts = sample_ensemble(s, 0);
    REQUIRE(pts.size() == 10000);
    double mx = 0.0, mp = 0.0;
    for (const auto& q : pts) {
        mx += q.x;
        mp += q.p;
    }
    const double m = static_cast<double>(pts.size());
    mx /= m;
    mp /= m;
    const double sigma = s.sigma();
    CHECK(std::abs(mx - 0.3) < 4.0 * sigma / std::sqrt(m));
    CHECK(std::abs(mp + 0.2) < 4.0 * sigma / std::sqrt(m));
    double vx = 0.0, vp = 0.0;
    for (const auto& q : pts) {
        vx += (q.x - mx) * (q.x - mx);
        vp += (q.p - mp) * (q.p - mp);
    }
    CHECK(std::abs(vx / (m - 1.0) / (sigma * sigma) - 1.0) < 0.1);
    CHECK(std::abs(vp / (m - 1.0) / (sigma * sigma) - 1.0) < 0.1);

    const auto again = sample_ensemble(s, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        REQUIRE(pts[i].x == again[i].x);
        REQUIRE(pts[i].p == again[i].p);
    }
    s.centers.push_back({0.0, 0.0});
    CHECK(sample_ensemble(s, 1)[0].x != pts[0].x);
    CHECK_THROWS_AS(sample_ensemble(s, 2), InvalidArgument);
}

TEST_CASE("ensemble validation") {
    auto s = ensemble(3, 10, 1e-3, 1, true);
    CHECK_NOTHROW(s.validate());
    s.hbar_c = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = ensemble(3, 0, 1e-3, 1, true);
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = ensemble(0, 10, 1e-3, 1, true);
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("t = 0 value") {
    const auto off = otoc_classical_all(ensemble(5, 50, hbar_exp(9), 3, false), with_r(0.2), 4);
    for (auto scheme : {AveragingScheme::AL, AveragingScheme::LA, AveragingScheme::LL})
        CHECK(off.get(scheme).at(0) == 0.0);
    const auto on = otoc_classical(ensemble(5, 50, hbar_exp(9), 3, true), AveragingScheme::AL, with_r(0.2), 4);
    CHECK(on.at(0) == doctest::Approx(2.0 * std::log(hbar_exp(9))).epsilon(1e-14));
    CHECK(on.meta.kind == "AL_c");
    CHECK(on.times.size() == 5);
    CHECK(on.meta.excluded.size() == 5);
}

TEST_CASE("r = 0 Jacobian entry stays one") {
    const auto s = otoc_classical_all(ensemble(4, 20, hbar_exp(9), 3, false), with_r(0.0), 20);
    for (auto scheme : {AveragingScheme::AL, AveragingScheme::LA, AveragingScheme::LL})
        for (double v : s.get(scheme).values) CHECK(v == 0.0);
}

TEST_CASE("single-scheme and combined runs agree") {
    const auto spec = ensemble(6, 100, hbar_exp(12), 8, true);
    const auto all = otoc_classical_all(spec, with_r(0.1), 8);
    for (auto scheme : {AveragingScheme::AL, AveragingScheme::LA, AveragingScheme::LL}) {
        const auto one = otoc_classical(spec, scheme, with_r(0.1), 8);
        CHECK(one.values == all.get(scheme).values);
    }
}

TEST_CASE("determinism across runs and thread counts") {
    const auto spec = ensemble(12, 200, hbar_exp(15), 21, true);
    const auto a = otoc_classical_all(spec, with_r(0.2), 10, 1);
    const auto b = otoc_classical_all(spec, with_r(0.2), 10, 1);
    const auto c = otoc_classical_all(spec, with_r(0.2), 10, 4);
    for (auto scheme : {AveragingScheme::AL, AveragingScheme::LA, AveragingScheme::LL}) {
        CHECK(a.get(scheme).values == b.get(scheme).values);
        CHECK(a.get(scheme).values == c.get(scheme).values);
    }
}

TEST_CASE("Jensen ordering LA >= AL >= LL") {
    for (int e : {9, 20, 30}) {
        const auto s = otoc_classical_all(ensemble(30, 300, hbar_exp(e), 40 + e, true), with_r(0.2), 15);
        for (std::size_t i = 0; i < s.al.size(); ++i) {
            CHECK(s.la.values[i] >= s.al.values[i] - 1e-12);
            CHECK(s.al.values[i] >= s.ll.values[i] - 1e-12);
        }
    }
}

TEST_CASE("LL and LA growth rates at r = 0.2") {
    const auto p = with_r(0.2);
    const auto s = otoc_classical_all(ensemble(100, 1000, hbar_exp(20), 2, true), p, 10);
    const double ll = fit_growth_rate(s.ll, {2, 10}).slope;
    const double la = fit_growth_rate(s.la, {2, 10}).slope;
    CHECK(std::abs(ll / (2.0 * lyapunov_series(p)) - 1.0) < 0.10);
    CHECK(std::abs(la / (2.0 * lyapunov_star(p)) - 1.0) < 0.10);
}

TEST_CASE("LL collapses across hbar_c") {
    const auto p = with_r(0.2);
    std::vector<double> at10;
    for (int e : {9, 15, 20, 30}) {
        const auto s = otoc_classical(ensemble(100, 300, hbar_exp(e), 6, false), AveragingScheme::LL, p, 10);
        at10.push_back(s.at(10));
    }
    const auto [lo, hi] = std::minmax_element(at10.begin(), at10.end());
    CHECK(*hi - *lo < 0.1 * std::abs(at10.back()));
}

TEST_CASE("uniform phase-space averages") {
    const auto p = with_r(0.2);
    CHECK_THROWS_AS(otoc_phase_space(p, AveragingScheme::AL, 100, 5, 1), InvalidArgument);
    const auto ll_u = otoc_phase_space(p, AveragingScheme::LL, 100000, 10, 3);
    // LA is carried by rare large Jacobians; its slope settles near 3.0, about 9%
    // above 2 lambda*, only once the sample runs into the millions.
    const auto la_u = otoc_phase_space(p, AveragingScheme::LA, 4000000, 10, 3);
    CHECK(ll_u.at(0) == 0.0);
    CHECK(la_u.at(0) == 0.0);
    const auto ll_g = otoc_classical(ensemble(100, 1000, hbar_exp(20), 2, false), AveragingScheme::LL, p, 10);
    const double su = fit_growth_rate(ll_u, {2, 10}).slope;
    const double sg = fit_growth_rate(ll_g, {2, 10}).slope;
    CHECK(std::abs(su / sg - 1.0) < 0.10);
    CHECK(std::abs(fit_growth_rate(la_u, {2, 10}).slope / (2.0 * lyapunov_star(p)) - 1.0) < 0.10);
    CHECK(otoc_phase_space(p, AveragingScheme::LL, 5000, 6, 9, 1).values ==
          otoc_phase_space(p, AveragingScheme::LL, 5000, 6, 9, 3).values);
}

TEST_CASE("doubling M stays within Monte-Carlo error") {
    const auto p = with_r(0.2);
    const double hb = hbar_exp(12);
    for (auto scheme : {AveragingScheme::AL, AveragingScheme::LL}) {
        // Standard error of the M-sample estimate from independent replicas that
        // share centers and differ only in the sample streams.
        std::vector<double> reps;
        for (std::uint64_t k = 0; k < 8; ++k) {
            auto s = ensemble(20, 500, hb, 4, true);
            s.seed = 1000 + k;
            reps.push_back(otoc_classical(s, scheme, p, 10).at(10));
        }
        double mean = 0.0;
        for (double v : reps) mean += v;
        mean /= reps.size();
        double var = 0.0;
        for (double v : reps) var += (v - mean) * (v - mean);
        const double se = std::sqrt(var / (reps.size() - 1));
        auto s = ensemble(20, 1000, hb, 4, true);
        s.seed = 1000;
        const double doubled = otoc_classical(s, scheme, p, 10).at(10);
        CHECK(std::abs(doubled - reps[0]) < 3.0 * se * std::sqrt(1.5));
    }
}

TEST_CASE("log-sum-exp handles huge log values") {
    LogSumExp acc;
    acc.add(1e6);
    acc.add(1e6);
    acc.add(-1e6);
    CHECK(std::isfinite(acc.log_sum()));
    CHECK(acc.log_sum() == doctest::Approx(1e6 + std::log(2.0)));
    CHECK(acc.log_mean() == doctest::Approx(1e6 + std::log(2.0 / 3.0)));
    const std::vector<double> v{7e5, 7e5 + 1.0};
    CHECK(log_mean_exp(v) == doctest::Approx(7e5 + std::log((1.0 + std::exp(1.0)) / 2.0)));
}

TEST_CASE("crossover time") {
    const double lam = lyapunov_series(with_r(0.2));
    const double hb = hbar_exp(30);
    CHECK(crossover_time(std::sqrt(hb), hb, lam) == doctest::Approx(0.0));
    const double t = crossover_time(0.2, hb, lam);
    CHECK(t > 0.0);
    CHECK(crossover_time(0.2, hb / 2.0, lam) - t == doctest::Approx(std::log(2.0) / (2.0 * lam)));
    double prev = -1e300;
    for (int e = 10; e <= 40; e += 5) {
        const double v = crossover_time(0.2, hbar_exp(e), lam);
        CHECK(v > prev);
        prev = v;
    }
}
