#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace genbound::cli {

/// Runs the CLI with the given arguments (excluding argv[0]); records go to
/// `out`, diagnostics to `err`.  Returns the process exit code: 0 success,
/// 1 usage error, 2 budget refusal.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace genbound::cli
