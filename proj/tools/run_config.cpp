#include "run_config.hpp"

#include "trimap/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace trimap::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw InvalidArgument("expected a finite number, got '" + text + "'");
    return v;
}

long long parse_integer(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE) throw InvalidArgument("expected an integer, got '" + text + "'");
    return v;
}

int parse_int(const std::string& text) {
    const long long v = parse_integer(text);
    if (v < -2147483647LL || v > 2147483647LL) throw InvalidArgument("integer out of range: '" + text + "'");
    return static_cast<int>(v);
}

std::size_t parse_count(const std::string& text) {
    const long long v = parse_integer(text);
    if (v < 0) throw InvalidArgument("expected a nonnegative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_u64(const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    if (!t.empty() && t[0] == '-') throw InvalidArgument("expected an unsigned integer, got '" + text + "'");
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE)
        throw InvalidArgument("expected an unsigned integer, got '" + text + "'");
    return v;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
    std::vector<T> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse(item));
    return out;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& v, Fmt fmt) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt(v[i]);
    }
    return s;
}

bool parse_switch(const std::string& text) {
    const std::string t = trim(text);
    if (t == "on" || t == "true" || t == "1") return true;
    if (t == "off" || t == "false" || t == "0") return false;
    throw InvalidArgument("expected on or off, got '" + text + "'");
}

std::string window_text(const std::optional<FitWindow>& w) {
    if (!w) return "";
    return std::to_string(w->t_min) + ":" + std::to_string(w->t_max);
}

std::string int_text(long long v) { return std::to_string(v); }

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

FitWindow parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("expected a window A:B, got '" + text + "'");
    FitWindow w{parse_int(text.substr(0, colon)), parse_int(text.substr(colon + 1))};
    if (w.t_min < 0 || w.t_min >= w.t_max) throw InvalidArgument("window needs 0 <= A < B, got '" + text + "'");
    return w;
}

MapParams RunConfig::params_with_r(double radius) const {
    MapParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.r = radius;
    return p;
}

std::vector<int> RunConfig::hbar_exponents() const {
    return hbar_exp_list.empty() ? std::vector<int>{hbar_exp} : hbar_exp_list;
}

void RunConfig::validate() const {
    const std::string& sc = subcommand;
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
    params_with_r(r.value_or(0.0)).validate();
    for (int e : hbar_exponents())
        if (e < 0 || e > 40) throw InvalidArgument("hbar-exp must lie in [0, 40], got " + std::to_string(e));
    if (steps < 0) throw InvalidArgument("steps must be >= 0");

    const bool needs_r_list = sc == "lyapunov" || sc == "sweep";
    if (needs_r_list) {
        if (r_list.empty()) throw InvalidArgument("r-list is empty");
        for (double v : r_list) params_with_r(v).validate();
    }
    if (sc == "lyapunov") {
        for (double v : r_list)
            if (v <= 0.0) throw InvalidArgument("lyapunov needs r > 0 in r-list, got " + format_double(v));
        if (orbit_steps < 1) throw InvalidArgument("orbit-steps must be >= 1");
        if (traj < 1) throw InvalidArgument("traj must be >= 1");
    }
    if (sc == "return-times") {
        if (r && *r <= 0.0) throw InvalidArgument("return-times needs r > 0");
        if (orbit_steps < 1) throw InvalidArgument("orbit-steps must be >= 1");
        if (traj < 1) throw InvalidArgument("traj must be >= 1");
    }
    if (sc == "classical-otoc" || sc == "quantum-otoc" || sc == "compare" || sc == "sweep") {
        if (centers < 1) throw InvalidArgument("centers must be >= 1");
        if (sc != "quantum-otoc" && samples < 1) throw InvalidArgument("samples must be >= 1");
        for (const auto& w : {fit_window, late_window}) {
            if (w && w->t_max > steps)
                throw InvalidArgument("window " + window_text(w) + " reaches beyond steps = " + std::to_string(steps));
            if (w && w->t_max - w->t_min < 2)
                throw InvalidArgument("window " + window_text(w) + " holds fewer than 3 points");
        }
    }
    if (sc == "quantum-otoc" || sc == "compare" || sc == "sweep") {
        if (dim != 0 && dim % 2 != 0) throw InvalidArgument("dim must be a positive even integer, got " + std::to_string(dim));
        std::vector<std::size_t> dims;
        if (dim != 0) dims.push_back(dim);
        else
            for (int e : hbar_exponents()) dims.push_back(std::size_t{1} << (e + 1));
        for (std::size_t d : dims)
            if (d > max_dim)
                throw SizeLimit("Hilbert dimension " + std::to_string(d) + " exceeds max-dim = " +
                                std::to_string(max_dim) + " (about " + std::to_string(d * 16 * 8 / (1 << 20)) +
                                " MiB of state vectors per thread); raise max-dim to allow it");
        if (companion_r) params_with_r(*companion_r).validate();
    }
    if (sc == "compare") {
        if (t0.empty()) throw InvalidArgument("t0 list is empty");
        for (int t : t0)
            if (t < 0 || t > steps)
                throw InvalidArgument("t0 = " + std::to_string(t) + " lies outside 0.." + std::to_string(steps));
    }
}

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"alpha", "potential strength",
         [](RunConfig& c, const std::string& v) { c.alpha = parse_double(v); },
         [](const RunConfig& c) { return format_double(c.alpha); }},
        {"beta", "constant potential offset",
         [](RunConfig& c, const std::string& v) { c.beta = parse_double(v); },
         [](const RunConfig& c) { return format_double(c.beta); }},
        {"r", "round-off radius",
         [](RunConfig& c, const std::string& v) {
             if (trim(v).empty()) c.r.reset();
             else c.r = parse_double(v);
         },
         [](const RunConfig& c) { return c.r ? format_double(*c.r) : std::string(); }},
        {"r-list", "comma-separated radii (lyapunov, sweep)",
         [](RunConfig& c, const std::string& v) { c.r_list = parse_list<double>(v, parse_double); },
         [](const RunConfig& c) { return join(c.r_list, format_double); }},
        {"hbar-exp", "hbar = 2^-N / pi",
         [](RunConfig& c, const std::string& v) { c.hbar_exp = parse_int(v); },
         [](const RunConfig& c) { return int_text(c.hbar_exp); }},
        {"hbar-exp-list", "comma-separated hbar exponents; overrides hbar-exp",
         [](RunConfig& c, const std::string& v) { c.hbar_exp_list = parse_list<int>(v, parse_int); },
         [](const RunConfig& c) { return join(c.hbar_exp_list, int_text); }},
        {"dim", "Hilbert dimension D (even); overrides hbar-exp for quantum runs",
         [](RunConfig& c, const std::string& v) { c.dim = parse_count(v); },
         [](const RunConfig& c) { return int_text(static_cast<long long>(c.dim)); }},
        {"steps", "OTOC time steps T",
         [](RunConfig& c, const std::string& v) { c.steps = parse_int(v); },
         [](const RunConfig& c) { return int_text(c.steps); }},
        {"orbit-steps", "orbit length for lyapunov and return-times",
         [](RunConfig& c, const std::string& v) { c.orbit_steps = parse_int(v); },
         [](const RunConfig& c) { return int_text(c.orbit_steps); }},
        {"centers", "number of ensemble centers N",
         [](RunConfig& c, const std::string& v) { c.centers = parse_count(v); },
         [](const RunConfig& c) { return int_text(static_cast<long long>(c.centers)); }},
        {"samples", "samples per center M (classical)",
         [](RunConfig& c, const std::string& v) { c.samples = parse_count(v); },
         [](const RunConfig& c) { return int_text(static_cast<long long>(c.samples)); }},
        {"traj", "orbits for lyapunov and return-times",
         [](RunConfig& c, const std::string& v) { c.traj = parse_count(v); },
         [](const RunConfig& c) { return int_text(static_cast<long long>(c.traj)); }},
        {"scheme", "al, la, ll or all",
         [](RunConfig& c, const std::string& v) {
             if (trim(v) == "all") c.scheme.reset();
             else c.scheme = parse_scheme(trim(v));
         },
         [](const RunConfig& c) -> std::string {
             if (!c.scheme) return "all";
             std::string s = to_string(*c.scheme);
             for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
             return s;
         }},
        {"prefactor", "on: add 2 ln hbar_c to classical OTOCs",
         [](RunConfig& c, const std::string& v) { c.prefactor = parse_switch(v); },
         [](const RunConfig& c) { return std::string(c.prefactor ? "on" : "off"); }},
        {"uniform", "on: classical LL/LA over the whole torus instead of Gaussian ensembles",
         [](RunConfig& c, const std::string& v) { c.uniform = parse_switch(v); },
         [](const RunConfig& c) { return std::string(c.uniform ? "on" : "off"); }},
        {"observable", "position observable: lifted, centered or fixed",
         [](RunConfig& c, const std::string& v) { c.observable = parse_branch_policy(trim(v)); },
         [](const RunConfig& c) { return std::string(to_string(c.observable)); }},
        {"fit-window", "A:B fit window (early window for classical AL)",
         [](RunConfig& c, const std::string& v) {
             if (trim(v).empty()) c.fit_window.reset();
             else c.fit_window = parse_window(v);
         },
         [](const RunConfig& c) { return window_text(c.fit_window); }},
        {"late-window", "A:B late fit window for classical AL",
         [](RunConfig& c, const std::string& v) {
             if (trim(v).empty()) c.late_window.reset();
             else c.late_window = parse_window(v);
         },
         [](const RunConfig& c) { return window_text(c.late_window); }},
        {"t0", "comma-separated comparison times",
         [](RunConfig& c, const std::string& v) { c.t0 = parse_list<int>(v, parse_int); },
         [](const RunConfig& c) { return join(c.t0, int_text); }},
        {"companion-r", "extra quantum run at this radius (quantum-otoc)",
         [](RunConfig& c, const std::string& v) {
             if (trim(v).empty()) c.companion_r.reset();
             else c.companion_r = parse_double(v);
         },
         [](const RunConfig& c) { return c.companion_r ? format_double(*c.companion_r) : std::string(); }},
        {"max-dim", "largest Hilbert dimension a run may allocate",
         [](RunConfig& c, const std::string& v) { c.max_dim = parse_count(v); },
         [](const RunConfig& c) { return int_text(static_cast<long long>(c.max_dim)); }},
        {"seed", "master seed",
         [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"threads", "worker threads",
         [](RunConfig& c, const std::string& v) {
             const long long t = parse_integer(v);
             if (t < 1 || t > 1024) throw InvalidArgument("threads must lie in [1, 1024]");
             c.threads = static_cast<unsigned>(t);
         },
         [](const RunConfig& c) { return std::to_string(c.threads); }},
        {"out", "output directory",
         [](RunConfig& c, const std::string& v) { c.out = trim(v); },
         [](const RunConfig& c) { return c.out; }},
    };
    return keys;
}

std::map<std::string, std::pair<std::string, int>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    std::map<std::string, std::pair<std::string, int>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidArgument(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto& k : config_keys()) known = known || k.key == key;
        if (!known) throw InvalidArgument(where + ": unknown key '" + key + "'");
        if (out.count(key)) throw InvalidArgument(where + ": key '" + key + "' repeated");
        out[key] = {value, lineno};
    }
    return out;
}

std::string to_config_text(const RunConfig& cfg) {
    std::string s;
    for (const auto& k : config_keys()) s += k.key + " = " + k.get(cfg) + "\n";
    return s;
}

} // namespace trimap::cli
