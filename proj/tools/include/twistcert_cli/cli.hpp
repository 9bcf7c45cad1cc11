#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twistcert::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalidInput = 2 };

/// Runs one command.  `args` excludes the program name.  Output goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twistcert::cli
