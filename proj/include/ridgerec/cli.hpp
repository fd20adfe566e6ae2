#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ridgerec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line args (args[0] is the program name). Normal output
/// goes to out, diagnostics and usage text to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ridgerec
