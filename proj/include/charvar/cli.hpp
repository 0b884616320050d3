#pragma once

#include <string>
#include <vector>

namespace charvar {

struct CliOutcome {
  int exit_code = 0;        // 0 ok, 1 input error, 2 tolerance failure
  std::string report;       // JSON (empty on input errors and --help)
  std::string diagnostics;  // human-readable messages for stderr
};

// Arguments without the program name, e.g. {"identities", "--sig", "{...}"}.
// Writes the report to --output when given (the report is returned either way).
CliOutcome run_cli(const std::vector<std::string>& args);

// Entry point for the executable: prints the report to stdout unless --output is set.
int run(int argc, char** argv);

}  // namespace charvar
