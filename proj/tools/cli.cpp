#include "cli.hpp"

#include "commands.hpp"
#include "run_config.hpp"
#include "trimap/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>

namespace trimap::cli {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Parses argv into `cfg`. Command-line values win over the config file, which
// wins over the built-in defaults.
void build_config(CLI::App& app, int argc, const char* const* argv, RunConfig& cfg) {
    std::map<std::string, std::string> given;
    std::map<std::string, CLI::Option*> opts;
    for (const auto& k : config_keys()) opts[k.key] = app.add_option("--" + k.key, given[k.key], k.help);
    std::string config_path;
    app.add_option("--config", config_path, "flat 'key = value' file; command-line flags override it");

    for (const auto& name : subcommand_names()) app.add_subcommand(name)->fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    app.parse(argc, argv);

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
        for (const auto& [key, entry] : read_config_file(config_path)) {
            if (opts[key]->count() > 0) continue;
            const auto& k = *std::find_if(config_keys().begin(), config_keys().end(),
                                          [&](const ConfigKey& c) { return c.key == key; });
            try {
                k.set(cfg, entry.first);
            } catch (const InvalidArgument& e) {
                throw InvalidArgument(config_path + ":" + std::to_string(entry.second) + ": key '" + key +
                                      "': " + e.what());
            }
        }
    }
    for (const auto& k : config_keys()) {
        if (opts[k.key]->count() == 0) continue;
        try {
            k.set(cfg, given[k.key]);
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("--" + k.key + ": " + e.what());
        }
    }
}

void execute(const RunConfig& cfg, int argc, const char* const* argv, std::ostream& out) {
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    const CommandResult res = run_command(cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    nlohmann::json meta;
    meta["command"] = cfg.subcommand;
    meta["version"] = kVersion;
    meta["seed"] = cfg.seed;
    meta["argv"] = std::vector<std::string>(argv, argv + argc);
    for (const auto& k : config_keys()) meta["config"][k.key] = k.get(cfg);
    meta["started_at"] = started;
    meta["elapsed_seconds"] = elapsed;
    meta["summary"] = res.summary;
    meta["outputs"] = nlohmann::json::array();
    for (const auto& t : res.tables) {
        write_file(dir / t.file, t.to_csv());
        meta["outputs"].push_back(t.file);
        out << "wrote " << (dir / t.file).string() << " (" << t.rows.size() << " rows)\n";
    }
    write_file(dir / (cfg.subcommand + ".conf"), to_config_text(cfg));
    write_file(dir / (cfg.subcommand + ".json"), meta.dump(2) + "\n");
    out << "wrote " << (dir / (cfg.subcommand + ".json")).string() << "\n";
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum and classical OTOCs of a piecewise-linear map on the torus", "trimap"};
    RunConfig cfg;
    try {
        build_config(app, argc, argv, cfg);
        cfg.validate();
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SizeLimit& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        execute(cfg, argc, argv, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientPoints& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DivisionByZero& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace trimap::cli
