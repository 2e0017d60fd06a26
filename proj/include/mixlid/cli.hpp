#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixlid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand. Data goes to files named by flags; `out` receives
/// human-readable output and `err` diagnostics.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace mixlid::cli
