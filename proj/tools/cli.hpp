#pragma once

#include <exception>
#include <ostream>
#include <string>
#include <vector>

namespace ffm::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;
inline constexpr int kIdentity = 4;

/// Runs the `ffm` command line (args excludes the program name). JSON goes to
/// out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Maps an exception escaping a subcommand to its exit code and writes the
/// diagnostic (naming the invariant for identity failures) to err.
int report_error(std::exception_ptr e, std::ostream& err);

}  // namespace ffm::cli
