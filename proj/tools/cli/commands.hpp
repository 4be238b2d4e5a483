#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace biphase::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSweepLimit = 2,
    kExitBoundViolation = 3,
};

/// Entry point for `biphase <command> [flags]`. Commands: solve, table,
/// compare-regularized, oracle-check.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same, with arguments excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biphase::cli
