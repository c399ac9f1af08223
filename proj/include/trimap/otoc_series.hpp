#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trimap {

enum class AveragingScheme { AL, LA, LL };

const char* to_string(AveragingScheme scheme) noexcept;
// Accepts "al", "la", "ll" in any case; throws InvalidArgument otherwise.
AveragingScheme parse_scheme(const std::string& text);

struct OtocMetadata {
    std::string kind;        // "AL_c", "LA_c", "LL_c", "AL_q"
    double r = 0.0;
    double hbar = 0.0;       // hbar for quantum runs, hbar_c for classical ones
    std::size_t n_centers = 0;
    std::size_t samples_per_center = 0;
    std::uint64_t seed = 0;
    bool hbar_prefactor = false;
    std::vector<std::uint64_t> excluded; // zero-Jacobian samples dropped at each t
};

// A log-OTOC time series on integer steps 0..T.
struct OtocSeries {
    std::vector<int> times;
    std::vector<double> values;
    OtocMetadata meta;

    std::size_t size() const noexcept { return values.size(); }
    // Value at step t; throws InvalidArgument when t is not in the series.
    double at(int t) const;
};

} // namespace trimap
