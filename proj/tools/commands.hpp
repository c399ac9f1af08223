#pragma once

#include "run_config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace trimap::cli {

// A CSV file: header plus rows of already formatted cells.
struct Table {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

struct CommandResult {
    std::vector<Table> tables;
    nlohmann::json summary = nlohmann::json::object();
};

const std::vector<std::string>& subcommand_names();

// Runs a validated configuration. Deterministic for a fixed RunConfig apart
// from thread scheduling, which never changes the numbers.
CommandResult run_command(const RunConfig& cfg);

} // namespace trimap::cli
