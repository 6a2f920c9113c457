#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace deforce::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct RunOptions {
  std::optional<std::string> config_path;
  std::string out_dir = ".";
  Overrides overrides;
  std::vector<std::string> suites;  ///< check only; empty means the config or all
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& suite_names();

/// Runs one subcommand, writing results and manifest.json into out_dir and
/// a short summary to out. Errors go to err; the return value is the exit
/// code.
int run(const std::string& command, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace deforce::cli
