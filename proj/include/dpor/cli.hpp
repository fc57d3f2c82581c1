#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpor {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one subcommand; `args` excludes the program name. Returns the exit
/// code: 0 success, 1 usage error, 2 data error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::string& path);

}  // namespace dpor
