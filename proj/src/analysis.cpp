#include "trimap/analysis.hpp"

#include "trimap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trimap {

GrowthFit fit_growth_rate(const OtocSeries& series, FitWindow window) {
    if (window.t_min >= window.t_max)
        throw InvalidArgument("fit window needs t_min < t_max");
    double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const int t = series.times[i];
        if (t < window.t_min || t > window.t_max) continue;
        const double v = series.values[i];
        st += t;
        sv += v;
        stt += static_cast<double>(t) * t;
        stv += t * v;
        ++n;
    }
    if (n < 3)
        throw InsufficientPoints("fit window [" + std::to_string(window.t_min) + ", " +
                                 std::to_string(window.t_max) + "] holds fewer than 3 points");
    const double dn = static_cast<double>(n);
    const double mean_t = st / dn;
    const double mean_v = sv / dn;
    const double sxx = stt - dn * mean_t * mean_t;
    const double sxy = stv - dn * mean_t * mean_v;

    GrowthFit fit;
    fit.window = window;
    fit.slope = sxy / sxx;
    fit.intercept = mean_v - fit.slope * mean_t;
    double ss = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const int t = series.times[i];
        if (t < window.t_min || t > window.t_max) continue;
        const double e = series.values[i] - (fit.intercept + fit.slope * t);
        ss += e * e;
    }
    fit.rms_residual = std::sqrt(ss / dn);
    return fit;
}

double delta_qc(const OtocSeries& al_q, const OtocSeries& al_c, int t0) {
    const double q = al_q.at(t0);
    const double c = al_c.at(t0);
    const double sum = q + c;
    if (sum == 0.0) throw DivisionByZero("AL_q + AL_c vanishes at t0 = " + std::to_string(t0));
    return std::abs(q - c) / std::abs(sum);
}

double matched_classical_r(double dim) {
    if (!(dim > 0.0)) throw InvalidArgument("dimension must be positive");
    return 1.0 / std::sqrt(dim);
}

double ehrenfest_estimate(double hbar, double lambda) {
    if (!(hbar > 0.0 && hbar < 1.0)) throw InvalidArgument("Ehrenfest estimate needs 0 < hbar < 1");
    if (!(lambda > 0.0)) throw InvalidArgument("Ehrenfest estimate needs lambda > 0");
    return std::abs(std::log(hbar)) / lambda;
}

FitWindow default_early_window(double t_star) {
    const int upper = std::min(5, static_cast<int>(std::floor(t_star - 1.0)));
    return FitWindow{1, std::max(3, upper)};
}

FitWindow default_late_window(double t_star, int width) {
    const int start = static_cast<int>(std::ceil(t_star)) + 1;
    return FitWindow{std::max(start, 0), std::max(start, 0) + width};
}

double line_crossing(const GrowthFit& early, const GrowthFit& late) {
    const double ds = late.slope - early.slope;
    if (ds == 0.0) throw DivisionByZero("parallel fit lines never cross");
    return (early.intercept - late.intercept) / ds;
}

} // namespace trimap
