#include "commands.hpp"

#include "trimap/classical_otoc.hpp"
#include "trimap/errors.hpp"
#include "trimap/lyapunov.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace trimap::cli {

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_double(v); }
std::string num(long long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }

double hbar_from_exponent(int e) { return std::ldexp(1.0, -e) / std::numbers::pi; }

// One quantum grid per requested hbar exponent, or a single one from --dim.
struct Grid {
    std::string label; // hbar exponent, empty when --dim picked the grid
    FloquetSpec spec;
};

std::vector<Grid> quantum_grids(const RunConfig& cfg, const MapParams& params) {
    if (cfg.dim != 0) return {{"", FloquetSpec::make(cfg.dim, params)}};
    std::vector<Grid> out;
    for (int e : cfg.hbar_exponents()) out.push_back({std::to_string(e), FloquetSpec::from_hbar_exponent(e, params)});
    return out;
}

OtocSeries run_quantum(const RunConfig& cfg, const FloquetSpec& spec) {
    const auto job = QuantumOtocJob::with_random_centers(spec, cfg.centers, cfg.steps, cfg.seed, cfg.observable);
    return otoc_quantum(job, cfg.threads);
}

// Centers come from `seed`, the Gaussian sample streams from seed + 1, so a
// classical run shares its centers with the quantum run of the same seed.
GaussianEnsembleSpec ensemble(const RunConfig& cfg, double hbar_c) {
    GaussianEnsembleSpec s;
    s.centers = draw_centers(cfg.centers, cfg.seed);
    s.hbar_c = hbar_c;
    s.samples_per_center = cfg.samples;
    s.seed = cfg.seed + 1;
    s.include_hbar_prefactor = cfg.prefactor;
    return s;
}

// Explicit window, or [1, min(5, steps)] when that holds at least two points.
std::optional<FitWindow> rate_window(const RunConfig& cfg) {
    if (cfg.fit_window) return cfg.fit_window;
    if (cfg.steps < 2) return std::nullopt;
    return FitWindow{1, std::min(5, cfg.steps)};
}

const Row kFitHeader{"t_min", "t_max", "slope", "intercept", "rms_residual"};

Row fit_cells(const GrowthFit& f) {
    return {num(f.window.t_min), num(f.window.t_max), num(f.slope), num(f.intercept), num(f.rms_residual)};
}

Row concat(Row a, const Row& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

CommandResult run_lyapunov(const RunConfig& cfg) {
    Table t{"lyapunov.csv", {"r", "lambda_numerical", "lambda_series", "lambda_simple", "lambda_max", "lambda_star"}, {}};
    for (double r : cfg.r_list) {
        const auto e = estimate_all(cfg.params_with_r(r), cfg.orbit_steps, cfg.traj, cfg.seed, cfg.threads);
        t.rows.push_back({num(r), num(e.lambda_numerical), num(e.lambda_series), num(e.lambda_simple),
                          num(e.lambda_max), num(e.lambda_star)});
    }
    return {{t}, {}};
}

CommandResult run_classical(const RunConfig& cfg) {
    const double r = cfg.radius_or(0.2);
    const MapParams params = cfg.params_with_r(r);
    Table series{"classical_otoc.csv", {"scheme", "hbar_c", "t", "value"}, {}};
    Table fits{"classical_otoc_fits.csv", concat({"scheme", "hbar_c", "window"}, kFitHeader), {}};
    CommandResult res;

    auto add_series = [&](const OtocSeries& s, const std::string& scheme, const std::string& hb) {
        for (std::size_t i = 0; i < s.size(); ++i) series.rows.push_back({scheme, hb, num(s.times[i]), num(s.values[i])});
    };

    if (cfg.uniform) {
        std::vector<AveragingScheme> schemes;
        if (cfg.scheme) {
            if (*cfg.scheme == AveragingScheme::AL) throw InvalidArgument("uniform sampling supports ll and la only");
            schemes.push_back(*cfg.scheme);
        } else {
            schemes = {AveragingScheme::LA, AveragingScheme::LL};
        }
        for (auto sc : schemes) {
            const auto s = otoc_phase_space(params, sc, cfg.centers * cfg.samples, cfg.steps, cfg.seed, cfg.threads);
            add_series(s, lower(to_string(sc)), "");
            if (const auto w = rate_window(cfg))
                fits.rows.push_back(concat({lower(to_string(sc)), "", "fit"}, fit_cells(fit_growth_rate(s, *w))));
        }
        res.tables = {series, fits};
        return res;
    }

    const double lambda = r > 0.0 ? lyapunov_series(params) : 0.0;
    res.summary["crossover"] = nlohmann::json::array();
    for (int e : cfg.hbar_exponents()) {
        const double hb = hbar_from_exponent(e);
        const auto set = otoc_classical_all(ensemble(cfg, hb), params, cfg.steps, cfg.threads);
        std::vector<AveragingScheme> schemes = {AveragingScheme::AL, AveragingScheme::LA, AveragingScheme::LL};
        if (cfg.scheme) schemes = {*cfg.scheme};
        for (auto sc : schemes) {
            const auto& s = set.get(sc);
            add_series(s, lower(to_string(sc)), num(hb));
            if (sc != AveragingScheme::AL) {
                if (const auto w = rate_window(cfg))
                    fits.rows.push_back(concat({lower(to_string(sc)), num(hb), "fit"}, fit_cells(fit_growth_rate(s, *w))));
                continue;
            }
            // AL: early and late windows around the crossover time.
            nlohmann::json info{{"hbar_c", hb}};
            std::optional<FitWindow> early = cfg.fit_window, late = cfg.late_window;
            if (r > 0.0) {
                const double t_star = crossover_time(r, hb, lambda);
                info["t_star"] = t_star;
                if (!early && t_star >= 3.0) {
                    const auto w = default_early_window(t_star);
                    if (w.t_max <= cfg.steps) early = w;
                }
                if (!late && t_star > 0.0) {
                    const auto w = default_late_window(t_star, 6);
                    if (w.t_max <= cfg.steps) late = w;
                }
            }
            std::optional<GrowthFit> fe, fl;
            if (early) {
                fe = fit_growth_rate(s, *early);
                fits.rows.push_back(concat({"al", num(hb), "early"}, fit_cells(*fe)));
            }
            if (late) {
                fl = fit_growth_rate(s, *late);
                fits.rows.push_back(concat({"al", num(hb), "late"}, fit_cells(*fl)));
            }
            if (fe && fl && fe->slope != fl->slope) info["line_crossing"] = line_crossing(*fe, *fl);
            res.summary["crossover"].push_back(info);
        }
    }
    res.tables = {series, fits};
    return res;
}

CommandResult run_quantum_cmd(const RunConfig& cfg) {
    const double r = cfg.radius_or(0.0);
    Table series{"quantum_otoc.csv", {"hbar_exp", "hbar", "dim", "r", "t", "al_q"}, {}};
    Table rates{"quantum_otoc_rates.csv", concat({"hbar_exp", "hbar", "dim", "r"}, kFitHeader), {}};
    std::vector<double> radii{r};
    if (cfg.companion_r) radii.push_back(*cfg.companion_r);
    for (double rr : radii) {
        for (const auto& g : quantum_grids(cfg, cfg.params_with_r(rr))) {
            const auto s = run_quantum(cfg, g.spec);
            const Row head{g.label, num(g.spec.hbar), num(g.spec.dim), num(rr)};
            for (std::size_t i = 0; i < s.size(); ++i)
                series.rows.push_back(concat(head, {num(s.times[i]), num(s.values[i])}));
            if (const auto w = rate_window(cfg)) rates.rows.push_back(concat(head, fit_cells(fit_growth_rate(s, *w))));
        }
    }
    return {{series, rates}, {}};
}

CommandResult run_compare(const RunConfig& cfg) {
    const double rq = cfg.radius_or(0.0);
    Table series{"compare.csv", {"hbar_exp", "hbar", "dim", "r_quantum", "r_classical", "t", "al_q", "al_c"}, {}};
    Table delta{"compare_delta.csv", {"hbar_exp", "hbar", "dim", "t0", "delta_qc", "ehrenfest"}, {}};
    for (const auto& g : quantum_grids(cfg, cfg.params_with_r(rq))) {
        const double rc = matched_classical_r(static_cast<double>(g.spec.dim));
        const MapParams pc = cfg.params_with_r(rc);
        const auto q = run_quantum(cfg, g.spec);
        const auto c = otoc_classical(ensemble(cfg, g.spec.hbar), AveragingScheme::AL, pc, cfg.steps, cfg.threads);
        for (std::size_t i = 0; i < q.size(); ++i)
            series.rows.push_back({g.label, num(g.spec.hbar), num(g.spec.dim), num(rq), num(rc), num(q.times[i]),
                                   num(q.values[i]), num(c.values[i])});
        const double t_e = ehrenfest_estimate(g.spec.hbar, lyapunov_series(pc));
        for (int t0 : cfg.t0)
            delta.rows.push_back({g.label, num(g.spec.hbar), num(g.spec.dim), num(t0), num(delta_qc(q, c, t0)), num(t_e)});
    }
    return {{series, delta}, {}};
}

CommandResult run_return_times(const RunConfig& cfg) {
    const double r = cfg.radius_or(0.1);
    const auto h = return_time_stats(cfg.params_with_r(r), cfg.traj, cfg.orbit_steps, cfg.seed, cfg.threads);
    const auto model = ReturnTimeModel::for_radius(r);
    Table t{"return_times.csv", {"tau", "count", "empirical_pmf", "model_pmf"}, {}};
    for (std::size_t tau = 1; tau < h.counts.size(); ++tau) {
        const double emp = h.total ? static_cast<double>(h.counts[tau]) / static_cast<double>(h.total) : 0.0;
        t.rows.push_back({num(tau), num(static_cast<std::size_t>(h.counts[tau])), num(emp), num(model.pmf(static_cast<int>(tau)))});
    }
    CommandResult res{{t}, {}};
    res.summary = {{"r", r}, {"returns", h.total}, {"mean_return_time", h.mean()}, {"model_mean", model.tau_bar}};
    return res;
}

CommandResult run_sweep(const RunConfig& cfg) {
    Table series{"sweep.csv", {"r", "hbar_exp", "hbar", "dim", "t", "al_q", "al_c"}, {}};
    Table fits{"sweep_fits.csv", concat({"r", "hbar_exp", "hbar", "series"}, kFitHeader), {}};
    for (double r : cfg.r_list) {
        const MapParams params = cfg.params_with_r(r);
        for (const auto& g : quantum_grids(cfg, params)) {
            const auto q = run_quantum(cfg, g.spec);
            const auto c = otoc_classical(ensemble(cfg, g.spec.hbar), AveragingScheme::AL, params, cfg.steps, cfg.threads);
            for (std::size_t i = 0; i < q.size(); ++i)
                series.rows.push_back({num(r), g.label, num(g.spec.hbar), num(g.spec.dim), num(q.times[i]),
                                       num(q.values[i]), num(c.values[i])});
            if (const auto w = rate_window(cfg)) {
                fits.rows.push_back(concat({num(r), g.label, num(g.spec.hbar), "al_q"}, fit_cells(fit_growth_rate(q, *w))));
                fits.rows.push_back(concat({num(r), g.label, num(g.spec.hbar), "al_c"}, fit_cells(fit_growth_rate(c, *w))));
            }
        }
    }
    return {{series, fits}, {}};
}

} // namespace

std::string Table::to_csv() const {
    std::string s;
    auto line = [&s](const Row& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += row[i];
        }
        s += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return s;
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"lyapunov", "classical-otoc", "quantum-otoc",
                                                "compare",  "return-times",   "sweep"};
    return names;
}

CommandResult run_command(const RunConfig& cfg) {
    const std::string& sc = cfg.subcommand;
    if (sc == "lyapunov") return run_lyapunov(cfg);
    if (sc == "classical-otoc") return run_classical(cfg);
    if (sc == "quantum-otoc") return run_quantum_cmd(cfg);
    if (sc == "compare") return run_compare(cfg);
    if (sc == "return-times") return run_return_times(cfg);
    if (sc == "sweep") return run_sweep(cfg);
    throw InvalidArgument("unknown subcommand '" + sc + "'");
}

} // namespace trimap::cli
