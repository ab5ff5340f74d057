#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "attackforge/pipeline.hpp"

namespace attackforge::cli {

enum ExitCode : int { kOk = 0, kDiagnostics = 1, kEnvironment = 2 };

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  BuildOptions build;
  /// `graph` export format: dot or json.
  std::string graph_format = "dot";
  bool color = false;
};

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_graph(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_build(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out,
                 std::ostream& err);

/// Parses `args` (without the program name) and dispatches to a
/// subcommand.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, bool color = false);

/// True when stderr is a terminal and ATTACKFORGE_NO_COLOR is unset.
bool color_enabled();

}  // namespace attackforge::cli
