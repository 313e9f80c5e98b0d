#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace biorv::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kAssemblyError = 2;
inline constexpr int kRuntimeFault = 3;
inline constexpr int kBudgetExhausted = 4;

// Runs one `biorv` command line. args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Golden encodings plus oracle equivalence on the bundled programs.
// Returns the number of failed checks.
int run_selftest(std::ostream& out);

}  // namespace biorv::cli
