#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rdsnet::cli {

enum ExitCode : int { ok = 0, usage = 1, validation = 2, runtime = 3 };

/// Runs one CLI invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdsnet::cli
