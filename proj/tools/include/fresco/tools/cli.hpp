#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fresco::tools {

enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitUsage = 2 };

/// Runs one `fresco` invocation. `args` excludes the program name. Reads
/// stdin only for `ingest -`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fresco::tools
