#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qtori::cli {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;         // unreadable file, bad JSON, expression errors
inline constexpr int kExitInvalidBasis = 3;  // dependent or degenerate basis
inline constexpr int kExitResourceCap = 4;   // enumeration box over --max-cells
inline constexpr int kExitInternal = 5;      // postcondition failures, unclassifiable group

// Runs one command. `args` excludes the program name. The report goes to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtori::cli
