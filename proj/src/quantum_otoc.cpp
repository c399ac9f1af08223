#include "trimap/quantum_otoc.hpp"

#include "trimap/errors.hpp"
#include "trimap/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>

namespace trimap {

const char* to_string(BranchPolicy policy) noexcept {
    switch (policy) {
    case BranchPolicy::Fixed: return "fixed";
    case BranchPolicy::Centered: return "centered";
    case BranchPolicy::Lifted: return "lifted";
    }
    return "?";
}

BranchPolicy parse_branch_policy(const std::string& text) {
    std::string s = text;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "fixed") return BranchPolicy::Fixed;
    if (s == "centered") return BranchPolicy::Centered;
    if (s == "lifted") return BranchPolicy::Lifted;
    throw InvalidArgument("unknown position observable '" + text + "' (expected fixed, centered or lifted)");
}

QuantumOtocJob QuantumOtocJob::with_random_centers(const FloquetSpec& spec, std::size_t n, int steps,
                                                   std::uint64_t seed, BranchPolicy branch) {
    QuantumOtocJob job;
    job.spec = spec;
    job.centers = draw_centers(n, seed);
    job.steps = steps;
    job.seed = seed;
    job.branch = branch;
    return job;
}

void QuantumOtocJob::validate() const {
    if (centers.empty()) throw InvalidArgument("quantum OTOC job needs at least one center");
    if (steps < 0) throw InvalidArgument("step count must be nonnegative");
    if (spec.dim == 0 || spec.dim % 2 != 0) throw InvalidArgument("invalid Hilbert dimension");
    spec.params.validate();
}

namespace {

OperatorBranch momentum_branch(BranchPolicy policy, double p_center, std::size_t dim) {
    return policy == BranchPolicy::Fixed ? OperatorBranch::fixed_momentum(dim) : centered_momentum_branch(p_center, dim);
}

OperatorBranch position_branch(BranchPolicy policy, const QuantumState& evolved) {
    return policy == BranchPolicy::Fixed ? OperatorBranch::fixed_position() : centered_position_branch(evolved);
}

// V'(x_j) on the grid. At r = 0 the grid contains both cusps (x = 0 and
// x = -1); there the force is the r -> 0+ limit, 0, rather than the one-sided
// sign(0) convention, so that the r = 0 operator is the limit of r > 0.
std::vector<double> force_values(const FloquetSpec& spec) {
    std::vector<double> f(spec.dim, 0.0);
    if (spec.zero_potential) return f;
    for (std::size_t j = 0; j < spec.dim; ++j) {
        const double x = spec.position(j);
        const bool cusp = spec.params.r == 0.0 && (x == 0.0 || x == -1.0);
        f[j] = cusp ? 0.0 : eval_Vp(x, spec.params);
    }
    return f;
}

// [x(t), p] psi = [x, p] psi - sum_{u<t} (t - u) G(u) with
// G(u) = F(u) p psi - p F(u) psi and F(u) = U^-u V'(x) U^u. The sum is carried
// as t * S0 - S1 with S0 = sum G(u), S1 = sum u G(u).
std::vector<double> squared_commutator_lifted(const FloquetEngine& engine, QuantumState psi, double p_center,
                                              int steps) {
    const FloquetSpec& spec = engine.spec();
    const std::size_t d = spec.dim;
    const OperatorBranch pb = centered_momentum_branch(p_center, d);
    const std::vector<double> force = force_values(spec);

    QuantumState chi = engine.apply_momentum(psi, pb);
    const OperatorBranch xb = centered_position_branch(psi);
    const QuantumState xp = engine.apply_position(chi, xb);
    const QuantumState px = engine.apply_momentum(engine.apply_position(psi, xb), pb);

    std::vector<cplx> base(d);
    for (std::size_t j = 0; j < d; ++j) base[j] = xp.amplitudes[j] - px.amplitudes[j];
    std::vector<cplx> s0(d, cplx{0.0, 0.0});
    std::vector<cplx> s1(d, cplx{0.0, 0.0});

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int t = 0;; ++t) {
        const double tt = static_cast<double>(t);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) norm2 += std::norm(base[j] - tt * s0[j] + s1[j]);
        out.push_back(norm2);
        if (t == steps) break;

        QuantumState a = chi;
        QuantumState b = psi;
        for (std::size_t j = 0; j < d; ++j) {
            a.amplitudes[j] *= force[j];
            b.amplitudes[j] *= force[j];
        }
        for (int s = 0; s < t; ++s) {
            engine.apply(a, Direction::Backward);
            engine.apply(b, Direction::Backward);
        }
        const QuantumState pfb = engine.apply_momentum(b, pb);
        for (std::size_t j = 0; j < d; ++j) {
            const cplx g = a.amplitudes[j] - pfb.amplitudes[j];
            s0[j] += g;
            s1[j] += tt * g;
        }
        engine.apply(psi, Direction::Forward);
        engine.apply(chi, Direction::Forward);
    }
    return out;
}

} // namespace

std::vector<double> squared_commutator(const FloquetEngine& engine, Center center, int steps, BranchPolicy branch) {
    return squared_commutator(engine, build_coherent_state(center, engine.spec()), center.p, steps, branch);
}

std::vector<double> squared_commutator(const FloquetEngine& engine, QuantumState psi, double p_center, int steps,
                                       BranchPolicy branch) {
    const FloquetSpec& spec = engine.spec();
    if (psi.size() != spec.dim) throw InvalidArgument("state dimension does not match the engine");
    if (steps < 0) throw InvalidArgument("step count must be nonnegative");
    if (branch == BranchPolicy::Lifted) return squared_commutator_lifted(engine, std::move(psi), p_center, steps);
    const OperatorBranch pb = momentum_branch(branch, p_center, spec.dim);

    QuantumState chi = engine.apply_momentum(psi, pb);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int t = 0;; ++t) {
        const OperatorBranch xb = position_branch(branch, psi);
        QuantumState a = engine.apply_position(chi, xb);
        QuantumState b = engine.apply_position(psi, xb);
        for (int s = 0; s < t; ++s) {
            engine.apply(a, Direction::Backward);
            engine.apply(b, Direction::Backward);
        }
        const QuantumState pb_b = engine.apply_momentum(b, pb);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < spec.dim; ++j) norm2 += std::norm(a.amplitudes[j] - pb_b.amplitudes[j]);
        out.push_back(norm2);
        if (t == steps) break;
        engine.apply(psi, Direction::Forward);
        engine.apply(chi, Direction::Forward);
    }
    return out;
}

std::vector<double> squared_commutator_dense(const FloquetSpec& spec, Center center, int steps, BranchPolicy branch) {
    const DenseOperators ops = dense_oracle(spec);
    const Eigen::MatrixXcd p = dense_momentum(spec, momentum_branch(branch, center.p, spec.dim));
    const Eigen::VectorXcd psi0 = to_eigen(build_coherent_state(center, spec));

    const auto d = static_cast<Eigen::Index>(spec.dim);
    Eigen::MatrixXcd ut = Eigen::MatrixXcd::Identity(d, d);
    std::vector<double> out;

    if (branch == BranchPolicy::Lifted) {
        QuantumState initial;
        initial.amplitudes.assign(psi0.data(), psi0.data() + psi0.size());
        const Eigen::MatrixXcd x = dense_position(spec, centered_position_branch(initial));
        const std::vector<double> force = force_values(spec);
        Eigen::VectorXcd fdiag(d);
        for (Eigen::Index j = 0; j < d; ++j) fdiag(j) = force[static_cast<std::size_t>(j)];
        std::vector<Eigen::MatrixXcd> f_heis; // U^-u V'(x) U^u
        for (int t = 0; t <= steps; ++t) {
            Eigen::MatrixXcd xt = x + static_cast<double>(t) * p;
            for (int u = 0; u < t; ++u) xt -= static_cast<double>(t - u) * f_heis[static_cast<std::size_t>(u)];
            const Eigen::MatrixXcd comm = xt * p - p * xt;
            out.push_back((comm * psi0).squaredNorm());
            f_heis.push_back(ut.adjoint() * fdiag.asDiagonal() * ut);
            ut = ops.U * ut;
        }
        return out;
    }

    for (int t = 0; t <= steps; ++t) {
        QuantumState evolved;
        const Eigen::VectorXcd e = ut * psi0;
        evolved.amplitudes.assign(e.data(), e.data() + e.size());
        const Eigen::MatrixXcd x = dense_position(spec, position_branch(branch, evolved));
        const Eigen::MatrixXcd xt = ut.adjoint() * x * ut;
        const Eigen::MatrixXcd comm = xt * p - p * xt;
        out.push_back((comm * psi0).squaredNorm());
        ut = ops.U * ut;
    }
    return out;
}

std::vector<double> mean_log_per_time(const std::vector<std::vector<double>>& per_center) {
    if (per_center.empty()) throw InvalidArgument("no centers to average");
    const std::size_t steps = per_center.front().size();
    for (std::size_t k = 0; k < per_center.size(); ++k) {
        if (per_center[k].size() != steps) throw InvalidArgument("per-center series have different lengths");
        for (std::size_t t = 0; t < steps; ++t)
            if (!(per_center[k][t] >= 1e-300))
                throw NumericalUnderflow(k, static_cast<int>(t),
                                         "squared commutator underflow at center " + std::to_string(k) + ", t = " +
                                             std::to_string(t));
    }
    std::vector<double> out(steps, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        double acc = 0.0;
        for (const auto& v : per_center) acc += std::log(v[t]);
        out[t] = acc / static_cast<double>(per_center.size());
    }
    return out;
}

OtocSeries otoc_quantum(const QuantumOtocJob& job, unsigned threads) {
    job.validate();
    const FloquetEngine engine(job.spec);
    const std::size_t n = job.centers.size();
    std::vector<std::vector<double>> per_center(n);
    parallel_for(n, threads, [&](std::size_t k) {
        per_center[k] = squared_commutator(engine, job.centers[k], job.steps, job.branch);
    });
    const std::vector<double> al = mean_log_per_time(per_center);

    OtocSeries s;
    s.meta.kind = "AL_q";
    s.meta.r = job.spec.params.r;
    s.meta.hbar = job.spec.hbar;
    s.meta.n_centers = n;
    s.meta.samples_per_center = 1;
    s.meta.seed = job.seed;
    s.meta.hbar_prefactor = false;
    s.meta.excluded.assign(static_cast<std::size_t>(job.steps) + 1, 0);
    for (int t = 0; t <= job.steps; ++t) {
        s.times.push_back(t);
        s.values.push_back(al[static_cast<std::size_t>(t)]);
    }
    return s;
}

std::vector<RatePoint> growth_rate_vs_hbar(const std::vector<int>& hbar_exponents, const MapParams& params,
                                           std::size_t n_centers, int steps, FitWindow window, std::uint64_t seed,
                                           unsigned threads, BranchPolicy branch) {
    if (hbar_exponents.size() < 2) throw InvalidArgument("need at least two values of hbar");
    std::vector<RatePoint> out;
    for (int e : hbar_exponents) {
        const auto spec = FloquetSpec::from_hbar_exponent(e, params);
        auto series = otoc_quantum(QuantumOtocJob::with_random_centers(spec, n_centers, steps, seed, branch), threads);
        const GrowthFit fit = fit_growth_rate(series, window);
        out.push_back(RatePoint{spec.hbar, fit, std::move(series)});
    }
    return out;
}

} // namespace trimap
