#include "trimap/classical_dynamics.hpp"

#include "trimap/errors.hpp"
#include "trimap/parallel.hpp"
#include "trimap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace trimap {

double wrap(double x) noexcept {
    double y = x - 2.0 * std::floor((x + 1.0) / 2.0);
    // x just below -1 can round up to exactly +1
    if (y >= 1.0) y -= 2.0;
    return y;
}

void TangentFrame::left_multiply(const Matrix& a) noexcept {
    log_det_ += std::log(std::abs(a[0] * a[3] - a[1] * a[2]));
    const Matrix& b = m_;
    m_ = Matrix{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    renormalize();
}

void TangentFrame::renormalize() noexcept {
    double mx = 0.0;
    for (double v : m_) mx = std::max(mx, std::abs(v));
    if (mx == 0.0 || !std::isfinite(mx)) return;
    int e = 0;
    std::frexp(mx, &e); // mx = f * 2^e, f in [0.5, 1)
    const int shift = e - 1;
    if (shift == 0) return;
    for (double& v : m_) v = std::ldexp(v, -shift);
    log_scale_ += shift * std::numbers::ln2;
}

double TangentFrame::log_abs_entry(int row, int col) const noexcept {
    const double v = m_[static_cast<std::size_t>(2 * row + col)];
    if (v == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(v)) + log_scale_;
}

double TangentFrame::log_abs_det_direct() const noexcept {
    const double det = m_[0] * m_[3] - m_[1] * m_[2];
    return std::log(std::abs(det)) + 2.0 * log_scale_;
}

TangentFrame::Matrix TangentFrame::dense() const noexcept {
    const double s = std::exp(log_scale_);
    return Matrix{s * m_[0], s * m_[1], s * m_[2], s * m_[3]};
}

PhasePoint map_step(PhasePoint point, const MapParams& params) noexcept {
    const double p = wrap(point.p - eval_Vp(point.x, params));
    return PhasePoint{wrap(point.x + p), p};
}

TangentFrame::Matrix tangent_matrix(double x, const MapParams& params) {
    const double k = params.r == 0.0 ? 0.0 : eval_Vpp(x, params);
    return TangentFrame::Matrix{1.0 - k, 1.0, -k, 1.0};
}

TangentFrame tangent_step(PhasePoint point, TangentFrame frame, const MapParams& params) {
    frame.left_multiply(tangent_matrix(point.x, params));
    return frame;
}

TrajectoryRecord evolve(PhasePoint start, int steps, const MapParams& params, bool record_frames) {
    if (steps < 0) throw InvalidArgument("step count must be nonnegative");
    TrajectoryRecord rec;
    rec.points.reserve(static_cast<std::size_t>(steps) + 1);
    if (record_frames) rec.frames.reserve(static_cast<std::size_t>(steps) + 1);

    PhasePoint pt{wrap(start.x), wrap(start.p)};
    TangentFrame frame = TangentFrame::identity();
    for (int n = 0;; ++n) {
        rec.points.push_back(pt);
        if (record_frames) rec.frames.push_back(frame);
        const RegionTag tag = classify_region(pt.x, params);
        if (tag != RegionTag::Outside) rec.region_hits.emplace_back(n, tag);
        if (n == steps) break;
        if (record_frames) frame = tangent_step(pt, frame, params);
        pt = map_step(pt, params);
    }
    return rec;
}

ReturnTimeModel ReturnTimeModel::for_radius(double r) {
    if (!(r > 0.0 && r < kMaxRadius)) throw InvalidArgument("return-time model needs 0 < r < sqrt(2)/2");
    const double p = std::numbers::sqrt2 * r;
    return ReturnTimeModel{p, 1.0 - p, 1.0 / p};
}

double ReturnTimeModel::pmf(int tau) const noexcept {
    if (tau < 1) return 0.0;
    return std::pow(q_r, tau - 1) * p_r;
}

double ReturnTimeHistogram::mean() const noexcept {
    if (total == 0) return 0.0;
    long double s = 0.0L;
    for (std::size_t tau = 1; tau < counts.size(); ++tau) s += static_cast<long double>(tau) * counts[tau];
    return static_cast<double>(s / total);
}

ReturnTimeHistogram return_time_stats(const MapParams& params, std::size_t n_traj, int steps,
                                      std::uint64_t seed, unsigned threads) {
    params.validate();
    if (params.r <= 0.0) throw InvalidArgument("return times are undefined for r = 0");
    if (steps < 0) throw InvalidArgument("step count must be nonnegative");

    std::vector<std::vector<std::uint64_t>> per_traj(n_traj);
    parallel_for(n_traj, threads, [&](std::size_t i) {
        SplitMix64 g(derive_seed(seed, i));
        PhasePoint pt{g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0)};
        auto& counts = per_traj[i];
        int last = -1;
        for (int n = 0; n <= steps; ++n) {
            if (classify_region(pt.x, params) != RegionTag::Outside) {
                if (last >= 0) {
                    const auto tau = static_cast<std::size_t>(n - last);
                    if (counts.size() <= tau) counts.resize(tau + 1, 0);
                    ++counts[tau];
                }
                last = n;
            }
            pt = map_step(pt, params);
        }
    });

    ReturnTimeHistogram hist;
    hist.counts.assign(1, 0);
    for (const auto& counts : per_traj) {
        if (hist.counts.size() < counts.size()) hist.counts.resize(counts.size(), 0);
        for (std::size_t tau = 1; tau < counts.size(); ++tau) {
            hist.counts[tau] += counts[tau];
            hist.total += counts[tau];
        }
    }
    return hist;
}

} // namespace trimap
