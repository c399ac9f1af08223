#pragma once

#include "trimap/classical_dynamics.hpp"
#include "trimap/otoc_series.hpp"
#include "trimap/potential.hpp"
#include "trimap/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace trimap {

// Gaussian initial ensembles of width sigma = sqrt(hbar_c / 2) around each center.
struct GaussianEnsembleSpec {
    std::vector<Center> centers;
    double hbar_c = 0.0;
    std::size_t samples_per_center = 1000;
    std::uint64_t seed = 0;
    // Adds 2 ln hbar_c to every value so that the classical series starts where
    // the quantum one does (AL_q(0) = 2 ln hbar).
    bool include_hbar_prefactor = true;

    double sigma() const noexcept { return std::sqrt(hbar_c / 2.0); }
    void validate() const;
};

// The M samples of center `center_index`, drawn with Box-Muller from the
// sub-stream derive_seed(seed, center_index) and wrapped onto the torus.
std::vector<PhasePoint> sample_ensemble(const GaussianEnsembleSpec& spec, std::size_t center_index);

// Monte-Carlo estimate of (d x(t) / d x(0))^2 averaged under `scheme`:
//   AL: mean over centers of ln(ensemble mean)
//   LA: ln(mean over centers of ensemble mean)
//   LL: mean over centers of ensemble mean of ln
// A-averages are taken with log-sum-exp.
OtocSeries otoc_classical(const GaussianEnsembleSpec& spec, AveragingScheme scheme, const MapParams& params,
                          int steps, unsigned threads = 1);

struct ClassicalOtocSet {
    OtocSeries al;
    OtocSeries la;
    OtocSeries ll;

    const OtocSeries& get(AveragingScheme scheme) const noexcept;
};

// All three schemes from one set of trajectories.
ClassicalOtocSet otoc_classical_all(const GaussianEnsembleSpec& spec, const MapParams& params, int steps,
                                    unsigned threads = 1);

// LL or LA with the Gaussian ensembles replaced by uniform sampling of the whole
// torus. No hbar prefactor is applied. Throws InvalidArgument for AL.
OtocSeries otoc_phase_space(const MapParams& params, AveragingScheme scheme, std::size_t n_samples, int steps,
                            std::uint64_t seed, unsigned threads = 1);

// (1/lambda) ln(r / sqrt(hbar_c)); negative when the ensemble starts wider than r.
double crossover_time(double r, double hbar_c, double lambda);

} // namespace trimap
