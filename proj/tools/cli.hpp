#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace databound::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kSingleClass = 3,
  kBadFlags = 4,
  kCheckFailed = 5,
};

/// Runs one subcommand. `args` excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace databound::cli
