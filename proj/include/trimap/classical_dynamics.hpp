#pragma once

#include "trimap/potential.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace trimap {

// Reduces any finite real into [-1, 1) as x - 2 floor((x + 1) / 2).
double wrap(double x) noexcept;

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
};

// Jacobian of the map carried as exp(log_scale) * m with the max-norm of m kept
// in [1, 2). Rescaling is by exact powers of two, so the mantissa matrix picks
// up no rounding from renormalization.
class TangentFrame {
public:
    using Matrix = std::array<double, 4>; // row-major {m00, m01, m10, m11}

    static TangentFrame identity() noexcept { return TangentFrame{}; }

    const Matrix& mantissa() const noexcept { return m_; }
    double log_scale() const noexcept { return log_scale_; }

    // Left-multiplies by a 2x2 matrix and renormalizes.
    void left_multiply(const Matrix& a) noexcept;

    // ln |J(i,j)| of the represented Jacobian; -inf when the entry is zero.
    double log_abs_entry(int row, int col) const noexcept;

    // ln |det J| accumulated from the determinants of the individual factors.
    double log_abs_det() const noexcept { return log_det_; }

    // ln |det J| recomputed from the mantissa. After many expanding steps m is
    // close to rank one and this cancels catastrophically; it is meaningful only
    // while exp(2 log_scale) * eps stays small.
    double log_abs_det_direct() const noexcept;

    // Represented Jacobian as plain doubles (overflows for large log_scale).
    Matrix dense() const noexcept;

private:
    void renormalize() noexcept;

    Matrix m_{1.0, 0.0, 0.0, 1.0};
    double log_scale_ = 0.0;
    double log_det_ = 0.0;
};

// One step of the map: p' = wrap(p - V'(x)), x' = wrap(x + p').
PhasePoint map_step(PhasePoint point, const MapParams& params) noexcept;

// Local tangent matrix [[1 - V''(x), 1], [-V''(x), 1]]. At r = 0 this is the
// shear [[1, 1], [0, 1]] everywhere (the cusp has measure zero).
TangentFrame::Matrix tangent_matrix(double x, const MapParams& params);

// frame <- M(point.x) * frame, where point is the position before the step.
TangentFrame tangent_step(PhasePoint point, TangentFrame frame, const MapParams& params);

struct TrajectoryRecord {
    std::vector<PhasePoint> points;   // T + 1 entries
    std::vector<TangentFrame> frames; // T + 1 entries when frames were requested, else empty
    std::vector<std::pair<int, RegionTag>> region_hits;
};

TrajectoryRecord evolve(PhasePoint start, int steps, const MapParams& params, bool record_frames);

// Geometric return-time law P(tau) = q^(tau - 1) p for visits to E, with
// p = sqrt(2) r the measure fraction of E.
struct ReturnTimeModel {
    double p_r;
    double q_r;
    double tau_bar;

    static ReturnTimeModel for_radius(double r);
    double pmf(int tau) const noexcept;
};

struct ReturnTimeHistogram {
    std::vector<std::uint64_t> counts; // counts[tau], tau >= 1; counts[0] unused
    std::uint64_t total = 0;

    double mean() const noexcept;
};

// Gaps between consecutive steps spent in E, pooled over n_traj orbits started
// uniformly on the torus and followed for `steps` steps.
ReturnTimeHistogram return_time_stats(const MapParams& params, std::size_t n_traj, int steps,
                                      std::uint64_t seed, unsigned threads = 1);

} // namespace trimap
