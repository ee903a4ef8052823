#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crowdspan {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitCheckFailed = 3 };

// Runs one command line. args[0] is the program name. Output that is not
// redirected with --out goes to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crowdspan
