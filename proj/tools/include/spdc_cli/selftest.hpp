#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spdc::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant suite over the library.
std::vector<CheckResult> selftest(int threads);

/// Prints the table; returns true iff every check passed.
bool print_selftest(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace spdc::cli
