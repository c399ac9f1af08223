#include "trimap/potential.hpp"

#include "trimap/errors.hpp"

#include <cmath>
#include <string>

namespace trimap {

void MapParams::validate() const {
    if (!std::isfinite(alpha) || alpha == 0.0)
        throw InvalidArgument("alpha must be finite and nonzero");
    if (!std::isfinite(beta))
        throw InvalidArgument("beta must be finite");
    if (!(r >= 0.0 && r < kMaxRadius))
        throw InvalidArgument("r must satisfy 0 <= r < sqrt(2)/2, got " + std::to_string(r));
}

const char* to_string(RegionTag tag) noexcept {
    switch (tag) {
    case RegionTag::E0: return "E0";
    case RegionTag::E1: return "E1";
    case RegionTag::Outside: return "outside";
    }
    return "?";
}

RegionTag classify_region(double x, const MapParams& params) noexcept {
    const double ax = std::abs(x);
    const double b = params.region_half_width();
    if (ax <= b) return RegionTag::E0;
    if (ax >= 1.0 - b) return RegionTag::E1;
    return RegionTag::Outside;
}

double eval_V(double x, const MapParams& params) noexcept {
    const double a = params.alpha;
    const double r = params.r;
    const double ax = std::abs(x);
    if (r == 0.0) return -a * ax - params.beta;

    switch (classify_region(x, params)) {
    case RegionTag::E0:
        return a * (-std::numbers::sqrt2 * r + std::sqrt(r * r - x * x)) - params.beta;
    case RegionTag::E1: {
        const double d = ax - 1.0;
        return a * (-1.0 + std::numbers::sqrt2 * r - std::sqrt(r * r - d * d)) - params.beta;
    }
    case RegionTag::Outside: break;
    }
    return -a * ax - params.beta;
}

double eval_Vp(double x, const MapParams& params) noexcept {
    const double a = params.alpha;
    const double r = params.r;
    const double sign = x >= 0.0 ? 1.0 : -1.0;
    if (r == 0.0) return -a * sign;

    switch (classify_region(x, params)) {
    case RegionTag::E0:
        return -a * x / std::sqrt(r * r - x * x);
    case RegionTag::E1: {
        const double d = std::abs(x) - 1.0;
        return a * sign * d / std::sqrt(r * r - d * d);
    }
    case RegionTag::Outside: break;
    }
    return -a * sign;
}

double eval_Vpp(double x, const MapParams& params) {
    const double r = params.r;
    if (r == 0.0)
        throw InvalidArgument("V'' is not a function at r = 0; use the shear-only tangent step");

    // Both arc branches reduce to +-alpha r^2 / (r^2 - u^2)^(3/2) with u the
    // offset from the cusp; the x <= -1 + sqrt(2) r/2 side uses u = x + 1.
    switch (classify_region(x, params)) {
    case RegionTag::E0: {
        const double q = r * r - x * x;
        return -params.alpha * r * r / (q * std::sqrt(q));
    }
    case RegionTag::E1: {
        const double d = std::abs(x) - 1.0;
        const double q = r * r - d * d;
        return params.alpha * r * r / (q * std::sqrt(q));
    }
    case RegionTag::Outside: break;
    }
    return 0.0;
}

} // namespace trimap
