#pragma once

#include "trimap/otoc_series.hpp"

#include <vector>

namespace trimap {

struct FitWindow {
    int t_min = 0;
    int t_max = 0;
};

struct GrowthFit {
    double slope = 0.0;     // per step
    double intercept = 0.0; // log units
    FitWindow window;
    double rms_residual = 0.0;
};

// Ordinary least squares over the series points with t_min <= t <= t_max.
// Throws InsufficientPoints when fewer than three points fall in the window.
GrowthFit fit_growth_rate(const OtocSeries& series, FitWindow window);

// |AL_q - AL_c| / |AL_q + AL_c| at t0. Throws DivisionByZero when the sum
// vanishes and InvalidArgument when t0 is missing from either series.
double delta_qc(const OtocSeries& al_q, const OtocSeries& al_c, int t0);

// Round-off radius paired with a quantum run of dimension D: 1/sqrt(D).
double matched_classical_r(double dim);

// (1/lambda) |ln hbar|, used as a marker for where quantum and classical OTOCs part.
double ehrenfest_estimate(double hbar, double lambda);

// Early window [1, min(5, t* - 1)] (at least [1, 3]).
FitWindow default_early_window(double t_star);
// Late window [ceil(t*) + 1, ceil(t*) + width].
FitWindow default_late_window(double t_star, int width);

// Step at which the early and late fitted lines intersect.
double line_crossing(const GrowthFit& early, const GrowthFit& late);

struct ComparisonRecord {
    double hbar = 0.0;
    std::size_t dim = 0;
    double r_quantum = 0.0;
    double r_classical = 0.0;
    std::vector<int> t0;
    std::vector<double> delta;
    double ehrenfest = 0.0;
};

} // namespace trimap
