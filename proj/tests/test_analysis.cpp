#include "trimap/analysis.hpp"
#include "trimap/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace trimap;

namespace {

OtocSeries line(double slope, double intercept, int steps) {
    OtocSeries s;
    for (int t = 0; t <= steps; ++t) {
        s.times.push_back(t);
        s.values.push_back(intercept + slope * t);
    }
    return s;
}

} // namespace

TEST_CASE("fit recovers an exact line") {
    const auto s = line(1.7, -14.0, 12);
    const auto f = fit_growth_rate(s, {2, 10});
    CHECK(f.slope == doctest::Approx(1.7).epsilon(1e-13));
    CHECK(f.intercept == doctest::Approx(-14.0).epsilon(1e-13));
    CHECK(f.rms_residual < 1e-12);
    CHECK(f.window.t_min == 2);
    CHECK(f.window.t_max == 10);
}

TEST_CASE("fit errors") {
    const auto s = line(1.0, 0.0, 4);
    CHECK_THROWS_AS(fit_growth_rate(s, {3, 4}), InsufficientPoints);
    CHECK_THROWS_AS(fit_growth_rate(s, {3, 9}), InsufficientPoints);
    CHECK_THROWS_AS(fit_growth_rate(s, {4, 4}), InvalidArgument);
    CHECK_THROWS_AS(fit_growth_rate(s, {5, 2}), InvalidArgument);
    CHECK_NOTHROW(fit_growth_rate(s, {2, 4}));
}

TEST_CASE("fit residual") {
    OtocSeries s;
    s.times = {0, 1, 2, 3};
    s.values = {0.0, 1.0, 0.0, 1.0};
    const auto f = fit_growth_rate(s, {0, 3});
    CHECK(f.slope == doctest::Approx(0.2));
    CHECK(f.rms_residual == doctest::Approx(std::sqrt(0.2)));
}

TEST_CASE("delta_qc") {
    const auto q = line(1.0, -20.0, 10);
    const auto c = line(1.2, -20.0, 10);
    CHECK(delta_qc(q, q, 6) == 0.0);
    CHECK(delta_qc(q, c, 6) == doctest::Approx(1.2 / 26.8));
    CHECK(delta_qc(q, c, 6) == delta_qc(c, q, 6));
    CHECK_THROWS_AS(delta_qc(q, c, 11), InvalidArgument);
    CHECK_THROWS_AS(delta_qc(q, c, -1), InvalidArgument);
    const auto z = line(1.0, -6.0, 10);
    const auto w = line(-1.0, 6.0, 10);
    CHECK_THROWS_AS(delta_qc(z, w, 3), DivisionByZero);
}

TEST_CASE("matched radius and Ehrenfest estimate") {
    CHECK(matched_classical_r(64) == 0.125);
    CHECK(matched_classical_r(1024) == doctest::Approx(1.0 / 32.0));
    CHECK_THROWS_AS(matched_classical_r(0), InvalidArgument);
    const double lam = 0.8;
    const double h = 1e-4;
    CHECK(ehrenfest_estimate(h / 2.0, lam) - ehrenfest_estimate(h, lam) == doctest::Approx(std::log(2.0) / lam));
    CHECK_THROWS_AS(ehrenfest_estimate(0.0, lam), InvalidArgument);
    CHECK_THROWS_AS(ehrenfest_estimate(h, 0.0), InvalidArgument);
}

TEST_CASE("default windows and crossing") {
    CHECK(default_early_window(11.15).t_min == 1);
    CHECK(default_early_window(11.15).t_max == 5);
    CHECK(default_early_window(3.0).t_max == 3);
    CHECK(default_late_window(11.15, 6).t_min == 13);
    CHECK(default_late_window(11.15, 6).t_max == 19);
    GrowthFit a{1.0, 0.0, {}, 0.0};
    GrowthFit b{3.0, -10.0, {}, 0.0};
    CHECK(line_crossing(a, b) == doctest::Approx(5.0));
}
