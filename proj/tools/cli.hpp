#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tropasym::cli {

/// Runs `trop-asym` with args (args[0] is the program name). Returns the
/// process exit code: 0 success, 1 input error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tropasym::cli
