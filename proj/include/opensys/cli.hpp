#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opensys {

/// Exit codes: 0 physical/satisfied, 2 violation detected, 1 usage or IO error.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitViolation = 2 };

/// Entry point of the `opensys` command line tool. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opensys
