#pragma once

#include <iosfwd>

namespace tvb::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,         // bad flags, unknown catalog name, malformed point or grid
  kExitDomain = 2,        // point or grid outside the chart domain, singular metric
  kExitParse = 3,         // manifold file or expression syntax error
  kExitAuditFailed = 4,   // theorem audit found a counterexample
  kExitAuditRefused = 5,  // theorem audit refused: chart not Bochner-flat on the grid
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tvb::cli
