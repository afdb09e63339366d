#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace neuropt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitAborted = 3;

/// Entry point of the `neuropt` driver; `args` excludes the program name.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace neuropt::cli
