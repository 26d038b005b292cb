#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svcg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCapRefused = 2;
inline constexpr int kExitNotEquilibrium = 3;

/// Runs one command line (args excludes the program name). Normal output goes
/// to `out`; failures print a single "error: ..." line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svcg::cli
