#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "spdc_cli/config.hpp"

namespace spdc::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kConvergence = 3 };

struct Artifact {
  std::filesystem::path path;
  std::size_t rows = 0;
};

struct RunOutcome {
  int exit_code = kOk;
  std::vector<Artifact> artifacts;
};

/// Executes the configured command, writes its CSV (and SVG when
/// `figures` is set) into `out_dir` and prints one summary line per file.
/// Library errors propagate to the caller.
RunOutcome run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Maps an exception to the documented exit status and prints it.
int report_error(std::ostream& err);

}  // namespace spdc::cli
