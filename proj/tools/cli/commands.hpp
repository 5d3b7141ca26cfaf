#pragma once

#include "cli/config.hpp"

namespace edgelap::cli {

// Executes the subcommand, writes the CSV and the summary JSON; returns the exit code
// (0 all checks pass, 1 scientific failure, 2 usage error).
int run(const RunConfig& config);

// Summary for a command line that could not be parsed.
std::string usage_error_summary(const std::vector<std::string>& args, const std::string& message);

}  // namespace edgelap::cli
