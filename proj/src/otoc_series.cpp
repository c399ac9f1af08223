#include "trimap/otoc_series.hpp"

#include "trimap/errors.hpp"

#include <algorithm>
#include <cctype>

namespace trimap {

const char* to_string(AveragingScheme scheme) noexcept {
    switch (scheme) {
    case AveragingScheme::AL: return "AL";
    case AveragingScheme::LA: return "LA";
    case AveragingScheme::LL: return "LL";
    }
    return "?";
}

AveragingScheme parse_scheme(const std::string& text) {
    std::string s = text;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "al") return AveragingScheme::AL;
    if (s == "la") return AveragingScheme::LA;
    if (s == "ll") return AveragingScheme::LL;
    throw InvalidArgument("unknown averaging scheme '" + text + "' (expected al, la or ll)");
}

double OtocSeries::at(int t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t)
        throw InvalidArgument("time " + std::to_string(t) + " is not in the series");
    return values[static_cast<std::size_t>(it - times.begin())];
}

} // namespace trimap
