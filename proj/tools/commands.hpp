#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qumark::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;

/// Runs the qumark command line on `args` (program name excluded). Output
/// files named "-" go to `out`, inputs named "-" are read from `in`.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace qumark::cli
