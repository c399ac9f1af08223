#pragma once

#include "trimap/analysis.hpp"
#include "trimap/otoc_series.hpp"
#include "trimap/potential.hpp"
#include "trimap/quantum_otoc.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trimap::cli {

inline constexpr const char* kVersion = "trimap 0.1.0";

struct RunConfig {
    std::string subcommand;

    double alpha = kDefaultAlpha;
    double beta = 0.0;
    std::optional<double> r; // unset: the subcommand's own default
    std::vector<double> r_list{0.2, 0.1, 0.05, 0.025, 0.0125};

    int hbar_exp = 9;
    std::vector<int> hbar_exp_list; // empty: use hbar_exp alone
    std::size_t dim = 0;            // nonzero overrides hbar_exp for quantum runs

    int steps = 10;
    int orbit_steps = 100000;
    std::size_t centers = 100;
    std::size_t samples = 1000;
    std::size_t traj = 100;

    std::optional<AveragingScheme> scheme; // unset: all three
    bool prefactor = true;
    bool uniform = false;
    BranchPolicy observable = BranchPolicy::Lifted;
    std::optional<FitWindow> fit_window;
    std::optional<FitWindow> late_window;
    std::vector<int> t0{6, 10};
    std::optional<double> companion_r;
    std::size_t max_dim = std::size_t{1} << 22;

    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = ".";

    // Radius from --r, or `fallback` when it was not given.
    double radius_or(double fallback) const { return r.value_or(fallback); }
    MapParams params_with_r(double radius) const;
    std::vector<int> hbar_exponents() const;
    // Physical and structural checks for the selected subcommand.
    void validate() const;
};

// One configuration key. Every key is also a CLI flag --<key>.
struct ConfigKey {
    std::string key;
    std::string help;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

// Flat "key = value" lines, '#' starts a comment. Throws InvalidArgument with
// the file name, line and key on any malformed line, unknown key or bad value.
std::map<std::string, std::pair<std::string, int>> read_config_file(const std::string& path);

// "key = value" text that read_config_file accepts and that reproduces `cfg`.
std::string to_config_text(const RunConfig& cfg);

std::string format_double(double v);
FitWindow parse_window(const std::string& text);

} // namespace trimap::cli
