#pragma once

#include "trimap/analysis.hpp"
#include "trimap/otoc_series.hpp"
#include "trimap/quantum_engine.hpp"
#include "trimap/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace trimap {

// Which position observable enters [x(t), p].
//   Fixed:    x(t) = U^-t x U^t with x and p both valued in [-1, 1).
//   Centered: as Fixed, but p is cut opposite the packet's momentum p_k and x
//             opposite the circular mean of |U^t psi|^2 at each output time.
//             Constant shifts commute with everything, so only the cut
//             location differs from Fixed.
//   Lifted:   x(t) on the covering space of the torus,
//               x(t) = x + t p - sum_{u<t} (t - u) U^-u V'(x) U^u,
//             the operator form of x_{n+1} = x_n + p_n - V'(x_n) without the
//             mod 2. Only the time-zero x and p carry a cut (centered on the
//             packet), so the stretched packet never straddles a seam.
enum class BranchPolicy { Fixed, Centered, Lifted };

const char* to_string(BranchPolicy policy) noexcept;
BranchPolicy parse_branch_policy(const std::string& text);

struct QuantumOtocJob {
    FloquetSpec spec;
    std::vector<Center> centers;
    int steps = 0;
    std::uint64_t seed = 0;
    BranchPolicy branch = BranchPolicy::Lifted;

    // N centers from draw_centers(N, seed).
    static QuantumOtocJob with_random_centers(const FloquetSpec& spec, std::size_t n, int steps,
                                              std::uint64_t seed, BranchPolicy branch = BranchPolicy::Lifted);
    void validate() const;
};

// ||[x(t), p] psi_k||^2 for t = 0..T, with x(t) = U^-t x U^t, computed by
// evolving (U^t psi, U^t p psi) forward and applying t backward steps at each t.
std::vector<double> squared_commutator(const FloquetEngine& engine, Center center, int steps, BranchPolicy branch);
// Same for an arbitrary initial state; p_center places the momentum cut for the
// centered and lifted observables.
std::vector<double> squared_commutator(const FloquetEngine& engine, QuantumState psi, double p_center, int steps,
                                       BranchPolicy branch);

// The same quantity from explicit matrices (D <= 256).
std::vector<double> squared_commutator_dense(const FloquetSpec& spec, Center center, int steps, BranchPolicy branch);

// AL_q(t) = mean over centers of ln ||[x(t), p] psi_k||^2. Throws
// NumericalUnderflow if a squared norm drops below 1e-300.
OtocSeries otoc_quantum(const QuantumOtocJob& job, unsigned threads = 1);

// Mean over centers of ln(value) at each t. Throws NumericalUnderflow naming
// the first center and time whose value is below 1e-300.
std::vector<double> mean_log_per_time(const std::vector<std::vector<double>>& per_center);

struct RatePoint {
    double hbar;
    GrowthFit fit;
    OtocSeries series;
};

// Fitted AL_q slope for each hbar = 2^-n / pi in `hbar_exponents`.
std::vector<RatePoint> growth_rate_vs_hbar(const std::vector<int>& hbar_exponents, const MapParams& params,
                                           std::size_t n_centers, int steps, FitWindow window, std::uint64_t seed,
                                           unsigned threads = 1, BranchPolicy branch = BranchPolicy::Lifted);

} // namespace trimap
