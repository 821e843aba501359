#pragma once

#include <string>
#include <vector>

namespace tzitzeica::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitValidation = 2,
    kExitNumerical = 3,
};

struct CliResult {
    int exit_code = kExitOk;
    std::string stdout_text;  // report, unless --output sent it to a file
    std::string stderr_text;
};

/// Runs one command line (args exclude the program name):
///   solve | degree | bounds | multiplicity | check  <graph-file> [flags]
CliResult run(const std::vector<std::string>& args);

} // namespace tzitzeica::cli
