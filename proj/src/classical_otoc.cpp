#include "trimap/classical_otoc.hpp"

#include "trimap/errors.hpp"
#include "trimap/logsum.hpp"
#include "trimap/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace trimap {

void GaussianEnsembleSpec::validate() const {
    if (centers.empty()) throw InvalidArgument("ensemble needs at least one center");
    if (!(hbar_c > 0.0) || !std::isfinite(hbar_c)) throw InvalidArgument("hbar_c must be positive");
    if (samples_per_center < 1) throw InvalidArgument("samples per center must be >= 1");
}

std::vector<PhasePoint> sample_ensemble(const GaussianEnsembleSpec& spec, std::size_t center_index) {
    spec.validate();
    if (center_index >= spec.centers.size()) throw InvalidArgument("center index out of range");
    const Center c = spec.centers[center_index];
    const double sigma = spec.sigma();
    SplitMix64 g(derive_seed(spec.seed, center_index));
    std::vector<PhasePoint> pts(spec.samples_per_center);
    for (auto& pt : pts) {
        const double dx = g.normal();
        const double dp = g.normal();
        pt = PhasePoint{wrap(c.x + sigma * dx), wrap(c.p + sigma * dp)};
    }
    return pts;
}

namespace {

// Per-group accumulators of ln (dx(t)/dx(0))^2 for t = 0..T.
struct GroupStats {
    std::vector<LogSumExp> lse;
    std::vector<double> log_sum;
    std::vector<std::uint64_t> used;
    std::vector<std::uint64_t> excluded;

    explicit GroupStats(int steps)
        : lse(static_cast<std::size_t>(steps) + 1), log_sum(static_cast<std::size_t>(steps) + 1, 0.0),
          used(static_cast<std::size_t>(steps) + 1, 0), excluded(static_cast<std::size_t>(steps) + 1, 0) {}

    double log_mean_exp(std::size_t t) const { return lse[t].log_sum() - std::log(static_cast<double>(used[t])); }
    double mean_log(std::size_t t) const { return log_sum[t] / static_cast<double>(used[t]); }
};

GroupStats accumulate(const std::vector<PhasePoint>& samples, const MapParams& params, int steps) {
    GroupStats stats(steps);
    for (PhasePoint pt : samples) {
        TangentFrame frame = TangentFrame::identity();
        for (int t = 0;; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            const double l = 2.0 * frame.log_abs_entry(0, 0);
            if (std::isfinite(l)) {
                stats.lse[ti].add(l);
                stats.log_sum[ti] += l;
                ++stats.used[ti];
            } else {
                ++stats.excluded[ti];
            }
            if (t == steps) break;
            frame = tangent_step(pt, frame, params);
            pt = map_step(pt, params);
        }
    }
    for (std::size_t t = 0; t < stats.used.size(); ++t)
        if (stats.used[t] == 0)
            throw DegenerateEnsemble("every sample of an ensemble has dx(t)/dx(0) = 0 at t = " + std::to_string(t));
    return stats;
}

OtocSeries make_series(const char* kind, int steps) {
    OtocSeries s;
    s.meta.kind = kind;
    for (int t = 0; t <= steps; ++t) s.times.push_back(t);
    s.values.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    s.meta.excluded.assign(static_cast<std::size_t>(steps) + 1, 0);
    return s;
}

} // namespace

const OtocSeries& ClassicalOtocSet::get(AveragingScheme scheme) const noexcept {
    switch (scheme) {
    case AveragingScheme::AL: return al;
    case AveragingScheme::LA: return la;
    case AveragingScheme::LL: return ll;
    }
    return al;
}

ClassicalOtocSet otoc_classical_all(const GaussianEnsembleSpec& spec, const MapParams& params, int steps,
                                    unsigned threads) {
    spec.validate();
    params.validate();
    if (steps < 0) throw InvalidArgument("step count must be nonnegative");

    const std::size_t n = spec.centers.size();
    std::vector<GroupStats> groups(n, GroupStats(0));
    parallel_for(n, threads, [&](std::size_t k) { groups[k] = accumulate(sample_ensemble(spec, k), params, steps); });

    ClassicalOtocSet out{make_series("AL_c", steps), make_series("LA_c", steps), make_series("LL_c", steps)};
    const double offset = spec.include_hbar_prefactor ? 2.0 * std::log(spec.hbar_c) : 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t <= static_cast<std::size_t>(steps); ++t) {
        double al = 0.0;
        double ll = 0.0;
        LogSumExp la;
        std::uint64_t excluded = 0;
        for (const auto& g : groups) {
            const double lme = g.log_mean_exp(t);
            al += lme;
            la.add(lme);
            ll += g.mean_log(t);
            excluded += g.excluded[t];
        }
        out.al.values[t] = al * inv_n + offset;
        out.la.values[t] = la.log_mean() + offset;
        out.ll.values[t] = ll * inv_n + offset;
        for (OtocSeries* s : {&out.al, &out.la, &out.ll}) s->meta.excluded[t] = excluded;
    }
    for (OtocSeries* s : {&out.al, &out.la, &out.ll}) {
        s->meta.r = params.r;
        s->meta.hbar = spec.hbar_c;
        s->meta.n_centers = n;
        s->meta.samples_per_center = spec.samples_per_center;
        s->meta.seed = spec.seed;
        s->meta.hbar_prefactor = spec.include_hbar_prefactor;
    }
    return out;
}

OtocSeries otoc_classical(const GaussianEnsembleSpec& spec, AveragingScheme scheme, const MapParams& params,
                          int steps, unsigned threads) {
    auto all = otoc_classical_all(spec, params, steps, threads);
    switch (scheme) {
    case AveragingScheme::AL: return std::move(all.al);
    case AveragingScheme::LA: return std::move(all.la);
    case AveragingScheme::LL: return std::move(all.ll);
    }
    return std::move(all.al);
}

OtocSeries otoc_phase_space(const MapParams& params, AveragingScheme scheme, std::size_t n_samples, int steps,
                            std::uint64_t seed, unsigned threads) {
    params.validate();
    if (scheme == AveragingScheme::AL)
        throw InvalidArgument("the AL scheme has no whole-phase-space form");
    if (n_samples == 0) throw InvalidArgument("need at least one sample");
    if (steps < 0) throw InvalidArgument("step count must be nonnegative");

    constexpr std::size_t kChunk = 1024;
    const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<GroupStats> groups(n_chunks, GroupStats(0));
    parallel_for(n_chunks, threads, [&](std::size_t c) {
        const std::size_t begin = c * kChunk;
        const std::size_t count = std::min(kChunk, n_samples - begin);
        SplitMix64 g(derive_seed(seed, c));
        std::vector<PhasePoint> pts(count);
        for (auto& pt : pts) {
            const double x = g.uniform(-1.0, 1.0);
            pt = PhasePoint{x, g.uniform(-1.0, 1.0)};
        }
        groups[c] = accumulate(pts, params, steps);
    });

    OtocSeries out = make_series(scheme == AveragingScheme::LL ? "LL_c" : "LA_c", steps);
    for (std::size_t t = 0; t <= static_cast<std::size_t>(steps); ++t) {
        LogSumExp pooled;
        double log_sum = 0.0;
        std::uint64_t used = 0;
        std::uint64_t excluded = 0;
        for (const auto& g : groups) {
            pooled.add(g.lse[t].log_sum());
            log_sum += g.log_sum[t];
            used += g.used[t];
            excluded += g.excluded[t];
        }
        out.values[t] = scheme == AveragingScheme::LL ? log_sum / static_cast<double>(used)
                                                      : pooled.log_sum() - std::log(static_cast<double>(used));
        out.meta.excluded[t] = excluded;
    }
    out.meta.r = params.r;
    out.meta.n_centers = 0;
    out.meta.samples_per_center = n_samples;
    out.meta.seed = seed;
    return out;
}

double crossover_time(double r, double hbar_c, double lambda) {
    if (!(r > 0.0) || !(hbar_c > 0.0) || !(lambda > 0.0))
        throw InvalidArgument("crossover time needs r, hbar_c and lambda all positive");
    return std::log(r / std::sqrt(hbar_c)) / lambda;
}

} // namespace trimap
