#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace trimap {

// splitmix64 (Steele, Lea, Flood). Every random stream in the library is one
// of these, so sample sequences are reproducible across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the sine branch is cached for the next call.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Seed of the independent sub-stream `index` derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    SplitMix64 g(master ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return g.next();
}

struct Center {
    double x;
    double p;
};

// N phase-space centers uniform on the torus [-1,1) x [-1,1). Quantum and
// classical runs that share a seed share their centers.
inline std::vector<Center> draw_centers(std::size_t n, std::uint64_t seed) {
    SplitMix64 g(seed);
    std::vector<Center> out(n);
    for (auto& c : out) {
        c.x = g.uniform(-1.0, 1.0);
        c.p = g.uniform(-1.0, 1.0);
    }
    return out;
}

} // namespace trimap
