#include "cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"trimap"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : owned) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = trimap::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_root() { return fs::temp_directory_path() / ("trimap_cli_" + std::to_string(::getpid())); }

struct RemoveScratchAtExit {
    ~RemoveScratchAtExit() {
        std::error_code ec;
        fs::remove_all(scratch_root(), ec);
    }
} remove_scratch_at_exit;

fs::path scratch(const std::string& name) {
    const auto p = scratch_root() / name;
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("cli: rerun and config replay give byte-identical tables") {
    const auto a = scratch("a"), b = scratch("b"), c = scratch("c");
    const std::initializer_list<std::string> common{"--hbar-exp", "6", "--centers", "4", "--samples", "50", "--seed", "11"};
    auto args = [&](const fs::path& dir, const std::string& threads) {
        std::vector<std::string> v{"compare"};
        v.insert(v.end(), common.begin(), common.end());
        v.insert(v.end(), {"--threads", threads, "--out", dir.string()});
        return v;
    };
    auto call = [](const std::vector<std::string>& v) {
        std::vector<const char*> argv{"trimap"};
        for (const auto& s : v) argv.push_back(s.c_str());
        std::ostringstream o, e;
        return trimap::cli::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    };
    REQUIRE(call(args(a, "1")) == 0);
    REQUIRE(call(args(b, "2")) == 0);
    for (const char* f : {"compare.csv", "compare_delta.csv"}) {
        CHECK(!slurp(a / f).empty());
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto r = cli({"compare", "--config", (a / "compare.conf").string(), "--out", c.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(a / "compare.csv") == slurp(c / "compare.csv"));
    CHECK(slurp(c / "compare.conf").find("seed = 11\n") != std::string::npos);
    CHECK(slurp(a / "compare.json").find("\"elapsed_seconds\"") != std::string::npos);
}

TEST_CASE("cli: command line overrides the config file") {
    const auto d = scratch("override");
    fs::create_directories(d);
    std::ofstream(d / "run.conf") << "# comment\nsteps = 4\ncenters = 2\nhbar-exp = 5\n";
    const auto r = cli({"quantum-otoc", "--config", (d / "run.conf").string(), "--steps", "3", "--out", d.string()});
    REQUIRE(r.code == 0);
    const auto conf = slurp(d / "quantum-otoc.conf");
    CHECK(conf.find("steps = 3\n") != std::string::npos);
    CHECK(conf.find("centers = 2\n") != std::string::npos);
}

TEST_CASE("cli: invalid input exits with status 2") {
    const auto d = scratch("bad");
    CHECK(cli({"lyapunov", "--r-list", "", "--out", d.string()}).code == 2);
    CHECK(cli({"quantum-otoc", "--dim", "63", "--out", d.string()}).code == 2);
    CHECK(cli({"compare", "--t0", "6,11", "--steps", "10", "--out", d.string()}).code == 2);
    CHECK(cli({"quantum-otoc", "--hbar-exp", "12", "--max-dim", "4096", "--out", d.string()}).code == 2);
    CHECK(cli({"quantum-otoc", "--fit-window", "2:3", "--out", d.string()}).code == 2);
    CHECK(cli({"lyapunov", "--steps", "ten"}).code == 2);
    CHECK(cli({"lyapunov", "--r", "-0.1"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(!fs::exists(d));

    fs::create_directories(d);
    std::ofstream(d / "bad.conf") << "steps = 5\n\nnot-a-key = 1\n";
    const auto r = cli({"quantum-otoc", "--config", (d / "bad.conf").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.conf:3") != std::string::npos);
    CHECK(r.err.find("not-a-key") != std::string::npos);
}

TEST_CASE("cli: help and version exit cleanly") {
    CHECK(cli({"--help"}).code == 0);
    const auto v = cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("trimap") != std::string::npos);
}
