#include "trimap/quantum_engine.hpp"

#include "trimap/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace trimap {

namespace {

// Plan creation and destruction are not thread-safe in FFTW.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

long positive_mod(long a, long d) noexcept {
    const long r = a % d;
    return r < 0 ? r + d : r;
}

fftw_complex* as_fftw(std::vector<cplx>& v) noexcept { return reinterpret_cast<fftw_complex*>(v.data()); }

// exp(-i pi k) for real k reduced mod 2.
cplx phase_pi(double k) noexcept {
    const double red = std::fmod(k, 2.0);
    return std::polar(1.0, -std::numbers::pi * red);
}

} // namespace

FloquetSpec FloquetSpec::make(std::size_t dim, const MapParams& params) {
    if (dim == 0 || dim % 2 != 0)
        throw InvalidArgument("Hilbert dimension must be a positive even integer, got " + std::to_string(dim));
    params.validate();
    FloquetSpec s;
    s.dim = dim;
    s.hbar = 2.0 / (std::numbers::pi * static_cast<double>(dim));
    s.params = params;
    return s;
}

FloquetSpec FloquetSpec::from_hbar_exponent(int n, const MapParams& params) {
    if (n < 0 || n > 40) throw InvalidArgument("hbar exponent out of range: " + std::to_string(n));
    return make(std::size_t{1} << (n + 1), params);
}

double FloquetSpec::position(std::size_t j) const noexcept {
    return -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(dim);
}

double FloquetSpec::momentum(std::size_t n) const noexcept {
    return branch_momentum(n, OperatorBranch::fixed_momentum(dim), dim);
}

double QuantumState::norm() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

cplx QuantumState::inner(const QuantumState& other) const {
    if (other.size() != size()) throw InvalidArgument("state dimensions differ");
    cplx s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += std::conj(amplitudes[j]) * other.amplitudes[j];
    return s;
}

double branch_position(std::size_t j, OperatorBranch branch, std::size_t dim) noexcept {
    const long d = static_cast<long>(dim);
    const long m = branch.first + positive_mod(static_cast<long>(j) - branch.first, d);
    return -1.0 + 2.0 * static_cast<double>(m) / static_cast<double>(dim);
}

double branch_momentum(std::size_t n, OperatorBranch branch, std::size_t dim) noexcept {
    const long d = static_cast<long>(dim);
    const long m = branch.first + positive_mod(static_cast<long>(n) - branch.first, d);
    return 2.0 * static_cast<double>(m) / static_cast<double>(dim);
}

OperatorBranch centered_position_branch(const QuantumState& state) {
    const std::size_t dim = state.size();
    double c = 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double w = std::norm(state.amplitudes[j]);
        const double angle = std::numbers::pi * (-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(dim));
        c += w * std::cos(angle);
        s += w * std::sin(angle);
    }
    const double theta = std::atan2(s, c) / std::numbers::pi; // circular mean in (-1, 1]
    // smallest value theta - 1, i.e. label (theta - 1 + 1) D / 2
    return OperatorBranch{std::lround(theta * static_cast<double>(dim) / 2.0)};
}

OperatorBranch centered_momentum_branch(double p, std::size_t dim) {
    const long half = static_cast<long>(dim / 2);
    return OperatorBranch{std::lround(p * static_cast<double>(dim) / 2.0) - half};
}

QuantumState build_coherent_state(Center center, const FloquetSpec& spec) {
    const double hbar = spec.hbar;
    QuantumState st;
    st.amplitudes.assign(spec.dim, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < spec.dim; ++j) {
        cplx sum = 0.0;
        for (int m = -1; m <= 1; ++m) {
            const double y = spec.position(j) + 2.0 * m - center.x;
            sum += std::exp(cplx{-y * y / (2.0 * hbar), center.p * y / hbar});
        }
        st.amplitudes[j] = sum;
    }
    const double n = st.norm();
    for (auto& a : st.amplitudes) a /= n;
    return st;
}

struct FloquetEngine::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit Plans(std::size_t dim) {
        std::vector<cplx> scratch(dim);
        std::lock_guard lock(fftw_planner_mutex());
        const int n = static_cast<int>(dim);
        constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward = fftw_plan_dft_1d(n, as_fftw(scratch), as_fftw(scratch), FFTW_FORWARD, flags);
        backward = fftw_plan_dft_1d(n, as_fftw(scratch), as_fftw(scratch), FFTW_BACKWARD, flags);
        if (!forward || !backward) throw std::runtime_error("FFTW planning failed");
    }
    ~Plans() {
        std::lock_guard lock(fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

FloquetEngine::FloquetEngine(FloquetSpec spec) : spec_(std::move(spec)) {
    if (spec_.dim == 0 || spec_.dim % 2 != 0) throw InvalidArgument("invalid FloquetSpec dimension");
    const std::size_t d = spec_.dim;
    const double dd = static_cast<double>(d);
    pot_.resize(d);
    kin_.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        // V / hbar = pi * V * D / 2
        const double v = spec_.zero_potential ? 0.0 : eval_V(spec_.position(j), spec_.params);
        pot_[j] = phase_pi(v * dd / 2.0);
    }
    const long dl = static_cast<long>(d);
    for (std::size_t n = 0; n < d; ++n) {
        // p^2 / (2 hbar) = pi m^2 / D, reduced exactly mod 2 pi
        const long m = n < d / 2 ? static_cast<long>(n) : static_cast<long>(n) - dl;
        const long red = positive_mod(m * m, 2 * dl);
        kin_[n] = phase_pi(static_cast<double>(red) / dd) / dd;
    }
    plans_ = std::make_unique<Plans>(d);
}

FloquetEngine::~FloquetEngine() = default;
FloquetEngine::FloquetEngine(FloquetEngine&&) noexcept = default;
FloquetEngine& FloquetEngine::operator=(FloquetEngine&&) noexcept = default;

void FloquetEngine::to_momentum(std::vector<cplx>& v) const {
    fftw_execute_dft(plans_->forward, as_fftw(v), as_fftw(v));
}

void FloquetEngine::to_position(std::vector<cplx>& v) const {
    fftw_execute_dft(plans_->backward, as_fftw(v), as_fftw(v));
    const double inv = 1.0 / static_cast<double>(spec_.dim);
    for (auto& a : v) a *= inv;
}

void FloquetEngine::apply(QuantumState& state, Direction direction) const {
    auto& v = state.amplitudes;
    if (v.size() != spec_.dim) throw InvalidArgument("state dimension does not match the engine");
    const std::size_t d = spec_.dim;
    if (direction == Direction::Forward) {
        for (std::size_t j = 0; j < d; ++j) v[j] *= pot_[j];
        fftw_execute_dft(plans_->forward, as_fftw(v), as_fftw(v));
        for (std::size_t n = 0; n < d; ++n) v[n] *= kin_[n];
        fftw_execute_dft(plans_->backward, as_fftw(v), as_fftw(v));
    } else {
        fftw_execute_dft(plans_->forward, as_fftw(v), as_fftw(v));
        for (std::size_t n = 0; n < d; ++n) v[n] *= std::conj(kin_[n]);
        fftw_execute_dft(plans_->backward, as_fftw(v), as_fftw(v));
        for (std::size_t j = 0; j < d; ++j) v[j] *= std::conj(pot_[j]);
    }
}

QuantumState FloquetEngine::apply_position(const QuantumState& state, OperatorBranch branch) const {
    if (state.size() != spec_.dim) throw InvalidArgument("state dimension does not match the engine");
    QuantumState out = state;
    for (std::size_t j = 0; j < spec_.dim; ++j) out.amplitudes[j] *= branch_position(j, branch, spec_.dim);
    return out;
}

QuantumState FloquetEngine::apply_momentum(const QuantumState& state, OperatorBranch branch) const {
    if (state.size() != spec_.dim) throw InvalidArgument("state dimension does not match the engine");
    QuantumState out = state;
    to_momentum(out.amplitudes);
    for (std::size_t n = 0; n < spec_.dim; ++n) out.amplitudes[n] *= branch_momentum(n, branch, spec_.dim);
    to_position(out.amplitudes);
    return out;
}

QuantumState floquet_apply(const FloquetEngine& engine, QuantumState state, Direction direction) {
    engine.apply(state, direction);
    return state;
}

namespace {

void check_dense_size(const FloquetSpec& spec) {
    if (spec.dim > kDenseOracleMaxDim)
        throw SizeLimit("dense oracle limited to D <= 256, got D = " + std::to_string(spec.dim));
}

Eigen::MatrixXcd dft_matrix(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd f(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index j = 0; j < d; ++j) {
            const long k = static_cast<long>((n * j) % d);
            f(n, j) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
        }
    return f;
}

} // namespace

Eigen::MatrixXcd dense_position(const FloquetSpec& spec, OperatorBranch branch) {
    check_dense_size(spec);
    const auto d = static_cast<Eigen::Index>(spec.dim);
    Eigen::VectorXcd diag(d);
    for (Eigen::Index j = 0; j < d; ++j) diag(j) = branch_position(static_cast<std::size_t>(j), branch, spec.dim);
    return diag.asDiagonal();
}

Eigen::MatrixXcd dense_momentum(const FloquetSpec& spec, OperatorBranch branch) {
    check_dense_size(spec);
    const auto d = static_cast<Eigen::Index>(spec.dim);
    const Eigen::MatrixXcd f = dft_matrix(spec.dim);
    Eigen::VectorXcd diag(d);
    for (Eigen::Index n = 0; n < d; ++n) diag(n) = branch_momentum(static_cast<std::size_t>(n), branch, spec.dim);
    return f.adjoint() * diag.asDiagonal() * f / static_cast<double>(d);
}

DenseOperators dense_oracle(const FloquetSpec& spec) {
    check_dense_size(spec);
    const auto d = static_cast<Eigen::Index>(spec.dim);
    const double dd = static_cast<double>(spec.dim);
    const Eigen::MatrixXcd f = dft_matrix(spec.dim);

    Eigen::VectorXcd pot(d);
    Eigen::VectorXcd kin(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double x = spec.position(static_cast<std::size_t>(j));
        const double v = spec.zero_potential ? 0.0 : eval_V(x, spec.params);
        pot(j) = std::exp(cplx{0.0, -v / spec.hbar});
        const double p = spec.momentum(static_cast<std::size_t>(j));
        kin(j) = std::exp(cplx{0.0, -p * p / (2.0 * spec.hbar)});
    }
    DenseOperators ops;
    ops.U = f.adjoint() * kin.asDiagonal() * f * pot.asDiagonal() / dd;
    ops.X = dense_position(spec, OperatorBranch::fixed_position());
    ops.P = dense_momentum(spec, OperatorBranch::fixed_momentum(spec.dim));
    return ops;
}

Eigen::VectorXcd to_eigen(const QuantumState& state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.size()));
    for (std::size_t j = 0; j < state.size(); ++j) v(static_cast<Eigen::Index>(j)) = state.amplitudes[j];
    return v;
}

} // namespace trimap
