#pragma once

#include "trimap/potential.hpp"
#include "trimap/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace trimap {

using cplx = std::complex<double>;

/// Hilbert-space conventions of the quantized map.
///
/// Position grid x_j = -1 + 2j/D, j = 0..D-1. Momentum values p = 2m/D for
/// integers m; FFT bin n carries m = n for n < D/2 and m = n - D otherwise, so
/// the fixed momentum branch is [-1, 1) like the classical torus. The phase-space
/// area 4 = 2 pi hbar D gives hbar = 2 / (pi D).
struct FloquetSpec {
    std::size_t dim = 0;
    double hbar = 0.0;
    MapParams params;
    // Replaces V by 0 in the evolution; used to test the kinetic factor alone.
    bool zero_potential = false;

    /// Throws InvalidArgument unless dim is a positive even integer.
    static FloquetSpec make(std::size_t dim, const MapParams& params);
    /// hbar = 2^-n / pi, i.e. D = 2^(n+1).
    static FloquetSpec from_hbar_exponent(int n, const MapParams& params);

    double position(std::size_t j) const noexcept;
    // Momentum on the fixed branch for FFT bin n.
    double momentum(std::size_t n) const noexcept;
};

struct QuantumState {
    std::vector<cplx> amplitudes; // position representation

    std::size_t size() const noexcept { return amplitudes.size(); }
    double norm() const noexcept;
    cplx inner(const QuantumState& other) const; // <this|other>
};

// Interval [base, base + 2) of operator eigenvalues. Grid values are assigned
// by index so that a value never sits on the cut.
struct OperatorBranch {
    long first = 0;    // integer label of the smallest value (x = -1 + 2 first / D or p = 2 first / D)

    static OperatorBranch fixed_position() noexcept { return OperatorBranch{0}; }
    static OperatorBranch fixed_momentum(std::size_t dim) noexcept { return OperatorBranch{-static_cast<long>(dim / 2)}; }
};

// Position branch centered on the circular mean of |psi(x)|^2.
OperatorBranch centered_position_branch(const QuantumState& state);
// Momentum branch centered on p.
OperatorBranch centered_momentum_branch(double p, std::size_t dim);

// Periodized coherent state: the Gaussian
//   (pi hbar)^(-1/4) exp(-(x - x_k)^2 / (2 hbar) + i p_k (x - x_k) / hbar)
// summed over the images x + 2m, m in {-1, 0, 1}, then normalized. The phase is
// measured from x_k, which differs from exp(i p_k x / hbar) by a global phase.
QuantumState build_coherent_state(Center center, const FloquetSpec& spec);

enum class Direction { Forward, Backward };

/// Split-step evolution and diagonal operators for one FloquetSpec.
///
/// One engine can be shared by several threads: FFT plans are executed on
/// caller-owned buffers through the new-array interface.
class FloquetEngine {
public:
    explicit FloquetEngine(FloquetSpec spec);
    ~FloquetEngine();
    FloquetEngine(const FloquetEngine&) = delete;
    FloquetEngine& operator=(const FloquetEngine&) = delete;
    FloquetEngine(FloquetEngine&&) noexcept;
    FloquetEngine& operator=(FloquetEngine&&) noexcept;

    const FloquetSpec& spec() const noexcept { return spec_; }

    // Forward: exp(-i V(x)/hbar) in position, then exp(-i p^2 / (2 hbar)) in
    // momentum. Backward applies the conjugate phases in reverse order.
    void apply(QuantumState& state, Direction direction) const;

    QuantumState apply_position(const QuantumState& state, OperatorBranch branch) const;
    QuantumState apply_momentum(const QuantumState& state, OperatorBranch branch) const;

    QuantumState apply_position(const QuantumState& state) const {
        return apply_position(state, OperatorBranch::fixed_position());
    }
    QuantumState apply_momentum(const QuantumState& state) const {
        return apply_momentum(state, OperatorBranch::fixed_momentum(spec_.dim));
    }

    void to_momentum(std::vector<cplx>& v) const;   // unnormalized forward DFT
    void to_position(std::vector<cplx>& v) const;   // inverse DFT including 1/D

    const std::vector<cplx>& potential_phase() const noexcept { return pot_; }
    const std::vector<cplx>& kinetic_phase() const noexcept { return kin_; }

private:
    struct Plans;

    FloquetSpec spec_;
    std::vector<cplx> pot_; // exp(-i V(x_j) / hbar)
    std::vector<cplx> kin_; // exp(-i p_n^2 / (2 hbar)) / D (inverse-DFT scale folded in)
    std::unique_ptr<Plans> plans_;
};

QuantumState floquet_apply(const FloquetEngine& engine, QuantumState state, Direction direction);

// Eigenvalue of the position operator at grid index j on a branch.
double branch_position(std::size_t j, OperatorBranch branch, std::size_t dim) noexcept;
// Eigenvalue of the momentum operator at FFT bin n on a branch.
double branch_momentum(std::size_t n, OperatorBranch branch, std::size_t dim) noexcept;

// Explicit D x D matrices built from the DFT matrix, independent of the FFT
// path. Throws SizeLimit above D = 256.
struct DenseOperators {
    Eigen::MatrixXcd U;
    Eigen::MatrixXcd X; // fixed branch
    Eigen::MatrixXcd P; // fixed branch
};

inline constexpr std::size_t kDenseOracleMaxDim = 256;

DenseOperators dense_oracle(const FloquetSpec& spec);
Eigen::MatrixXcd dense_position(const FloquetSpec& spec, OperatorBranch branch);
Eigen::MatrixXcd dense_momentum(const FloquetSpec& spec, OperatorBranch branch);

Eigen::VectorXcd to_eigen(const QuantumState& state);

} // namespace trimap
