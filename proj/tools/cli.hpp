#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gossip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Parses and runs one command line. args excludes the program name.
/// Returns 0 on success, 1 on a usage error, 2 on a runtime error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gossip::cli
