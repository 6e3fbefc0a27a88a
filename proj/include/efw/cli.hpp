#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace efw::cli {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 on success, 1 on a computation error (a JSON error object is written to
/// `out`), 2 on a usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace efw::cli
