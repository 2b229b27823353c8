#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ehupm::cli {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 usage, parse or validation error, 2 runtime or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ehupm::cli
