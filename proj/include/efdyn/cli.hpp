#pragma once

#include <string>
#include <vector>

#include "efdyn/report.hpp"

namespace efdyn {

struct RunOutcome {
  std::vector<std::string> files; // relative to the output directory
  bool numericFailure = false;    // a section failed with something other than a model error
};

// Executes one config and writes report.json, summary.txt and the CSV files into outDir.
RunOutcome run(const RunConfig& config, const std::string& outDir);

// Entry point of the efdyn tool. Exit codes: 0 success, 2 config error, 3 internal failure.
int cli_main(int argc, char** argv);

} // namespace efdyn
