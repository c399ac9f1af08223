#pragma once

#include <cmath>
#include <numbers>

namespace trimap {

// alpha = [(sqrt(5) - 1)/2 - e] / 2 with (sqrt(5) - 1)/2 = phi - 1, an irrational strength for which the
// unrounded map is ergodic.
inline constexpr double kDefaultAlpha = (std::numbers::phi - 1.0 - std::numbers::e) / 2.0;

// Upper bound on the round-off radius: beyond it the regions E0 and E1 overlap.
inline constexpr double kMaxRadius = std::numbers::sqrt2 / 2.0;

/// Parameters of the round-off triangle map V(x) = alpha * v_r(x) - beta.
struct MapParams {
    double alpha = kDefaultAlpha;
    double beta = 0.0;
    double r = 0.0;

    /// Throws InvalidArgument unless 0 <= r < sqrt(2)/2 and alpha != 0.
    void validate() const;

    // Half-width sqrt(2) r / 2 of E0 (and of E1 measured from |x| = 1).
    double region_half_width() const noexcept { return std::numbers::sqrt2 * r / 2.0; }
};

enum class RegionTag { E0, E1, Outside };

const char* to_string(RegionTag tag) noexcept;

// Potential and its derivatives on the torus coordinate x in [-1, 1).
// Inside |x| <= sqrt(2) r/2 the cusp at 0 is replaced by a circle arc, likewise
// for |x| >= 1 - sqrt(2) r/2; ties go to the arc branch.
double eval_V(double x, const MapParams& params) noexcept;

// For r = 0 this is -alpha * sign(x) with sign(0) = +1.
double eval_Vp(double x, const MapParams& params) noexcept;

// Second derivative; zero outside E. Throws InvalidArgument for r = 0, where
// V'' is a distribution and callers must use the shear-only tangent step.
double eval_Vpp(double x, const MapParams& params);

RegionTag classify_region(double x, const MapParams& params) noexcept;

// Width of E = E0 u E1 on the x circle.
inline double region_width(const MapParams& params) noexcept { return 2.0 * std::numbers::sqrt2 * params.r; }

} // namespace trimap
