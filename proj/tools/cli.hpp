#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gwsearch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Entry point shared by the `gwsearch` binary and the CLI tests.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace gwsearch::cli
